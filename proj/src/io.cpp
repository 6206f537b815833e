#include "pa/io.hpp"

#include <charconv>
#include <chrono>
#include <fstream>

#include "pa/config.hpp"
#include "pa/simd/kernels.hpp"
#include "pa/version.hpp"

namespace pa {

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << contents;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string cell_to_csv(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return format_double(value.get<double>());
  return value.dump();
}

// Rows are JSON objects sharing the column set; CSV and JSON emissions render
// the same values.
void write_table(const EmitOptions& options, const std::string& stem,
                 const std::vector<std::string>& columns,
                 const std::vector<nlohmann::json>& rows) {
  if (options.format == "json") {
    nlohmann::json array = nlohmann::json::array();
    for (const auto& row : rows) array.push_back(row);
    write_file(options.out_dir / (stem + ".json"), array.dump(2) + "\n");
    return;
  }
  std::string text;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) text += ',';
    text += columns[i];
  }
  text += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) text += ',';
      text += cell_to_csv(row.at(columns[i]));
    }
    text += '\n';
  }
  write_file(options.out_dir / (stem + ".csv"), text);
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buffer[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

}  // namespace

nlohmann::json plan_to_json(const ExperimentPlan& plan) {
  nlohmann::json j;
  j["kind"] = plan_kind_name(plan.kind);
  j["replicates"] = plan.resolved_replicates();
  j["seed"] = plan.master_seed;
  j["quadratic"] = {{"dim", plan.quadratic.dim},
                    {"start_scale", plan.quadratic.start_scale},
                    {"xi_scale", plan.quadratic.xi_scale},
                    {"layers", plan.quadratic.apf.layers},
                    {"particles", plan.quadratic.apf.particles},
                    {"decay", plan.quadratic.apf.decay},
                    {"deep_eta", plan.quadratic.deep_eta},
                    {"deep_lambda", plan.quadratic.deep_lambda}};
  j["scaling"] = {{"d_grid", plan.scaling.d_grid}, {"k_grid", plan.scaling.k_grid},
                  {"s_grid", plan.scaling.s_grid}, {"base_d", plan.scaling.base_d},
                  {"base_k", plan.scaling.base_k}, {"base_s", plan.scaling.base_s}};
  j["apf1000"] = {{"layers", plan.apf1000.layers},
                  {"particles", plan.apf1000.particles},
                  {"decay", plan.apf1000.decay}};
  j["apf500"] = {{"layers", plan.apf500.layers},
                 {"particles", plan.apf500.particles},
                 {"decay", plan.apf500.decay}};
  j["pa"] = {{"initial_samples", plan.pa.initial_samples},
             {"layers", plan.pa.layers},
             {"new_per_layer", plan.pa.new_per_layer},
             {"eta", plan.pa.eta},
             {"lambda", plan.pa.lambda}};
  j["sensitivity"] = {{"d", plan.sensitivity.objective_d},
                      {"k", plan.sensitivity.objective_k},
                      {"s", plan.sensitivity.objective_s},
                      {"eta_sweep", plan.sensitivity.eta_sweep},
                      {"lambda_sweep", plan.sensitivity.lambda_sweep},
                      {"n0_sweep", plan.sensitivity.n0_sweep},
                      {"layers_sweep", plan.sensitivity.layers_sweep},
                      {"c_sweep", plan.sensitivity.c_sweep}};
  return j;
}

void emit_resolved_config(const EmitOptions& options, const ExperimentPlan& plan) {
  write_file(options.out_dir / "resolved_config.cfg", serialize_plan(plan));
}

void emit_metadata(const EmitOptions& options, const ExperimentPlan& plan, int workers) {
  nlohmann::json j;
  j["config"] = plan_to_json(plan);
  j["master_seed"] = plan.master_seed;
  j["version"] = PA_VERSION_STRING;
  j["simd_backend"] = simd::active_backend_name();
  j["workers"] = workers;
  j["format"] = options.format;
  j["timestamp"] = iso_timestamp();
  write_file(options.out_dir / "metadata.json", j.dump(2) + "\n");
}

void emit_sweep(const EmitOptions& options, const SweepResult& sweep) {
  const std::vector<std::string> stat_columns{"grid_value", "method",     "mean_I",
                                              "std_I",      "eval_count", "replicates"};
  std::vector<nlohmann::json> stat_rows;
  for (const MethodStats& s : sweep.stats()) {
    stat_rows.push_back({{"grid_value", s.grid_value},
                         {"method", s.method},
                         {"mean_I", s.mean_improvement},
                         {"std_I", s.std_improvement},
                         {"eval_count", s.mean_eval_count},
                         {"replicates", s.replicates}});
  }
  write_table(options, "stats_" + sweep.sweep_name, stat_columns, stat_rows);

  const std::vector<std::string> raw_columns{"grid_value", "method", "replicate",
                                             "improvement"};
  std::vector<nlohmann::json> raw_rows;
  for (std::size_t g = 0; g < sweep.grid_values.size(); ++g) {
    for (std::size_t m = 0; m < sweep.methods.size(); ++m) {
      const auto& values = sweep.improvements[g][m];
      for (std::size_t r = 0; r < values.size(); ++r) {
        raw_rows.push_back({{"grid_value", sweep.grid_values[g]},
                            {"method", sweep.methods[m]},
                            {"replicate", static_cast<int>(r)},
                            {"improvement", values[r]}});
      }
    }
  }
  write_table(options, "raw_" + sweep.sweep_name, raw_columns, raw_rows);
}

void emit_quadratic(const EmitOptions& options, const QuadraticReuseResult& result) {
  const std::vector<std::string> stat_columns{"configuration", "median_norm", "mean_norm",
                                              "std_norm",      "mean_I",      "replicates"};
  std::vector<nlohmann::json> stat_rows;
  for (std::size_t c = 0; c < result.configurations.size(); ++c) {
    const auto& norms = result.final_norms[c];
    const double mean = mean_of(norms);
    stat_rows.push_back({{"configuration", result.configurations[c]},
                         {"median_norm", median_of(norms)},
                         {"mean_norm", mean},
                         {"std_norm", stddev_of(norms, mean)},
                         {"mean_I", mean_of(result.improvements[c])},
                         {"replicates", static_cast<int>(norms.size())}});
  }
  write_table(options, "stats_quadratic", stat_columns, stat_rows);

  // Raw histogram data, one file per configuration, binning left to plotting.
  for (std::size_t c = 0; c < result.configurations.size(); ++c) {
    const std::vector<std::string> columns{"replicate", "final_norm", "improvement"};
    std::vector<nlohmann::json> rows;
    for (std::size_t r = 0; r < result.final_norms[c].size(); ++r) {
      rows.push_back({{"replicate", static_cast<int>(r)},
                      {"final_norm", result.final_norms[c][r]},
                      {"improvement", result.improvements[c][r]}});
    }
    write_table(options, "norms_" + result.configurations[c], columns, rows);
  }
}

namespace {

nlohmann::json matrix_diag(const Matrix& m) {
  std::vector<double> diag(m.rows());
  for (int i = 0; i < m.rows(); ++i) diag[i] = m(i, i);
  return diag;
}

nlohmann::json config_snapshot(const RunRecord& record) {
  nlohmann::json j;
  if (record.apf_config) {
    const ApfConfig& c = *record.apf_config;
    j["type"] = "apf";
    j["particles_per_layer"] = c.particles_per_layer;
    j["layers"] = c.layers;
    j["decay_alpha"] = c.decay_alpha;
    j["survival_target"] = c.survival_target;
    j["diffusion_cov_diag"] = matrix_diag(c.diffusion_cov);
    j["resampling"] =
        c.resampling == ResamplingScheme::Systematic ? "systematic" : "multinomial";
  } else if (record.pa_config) {
    const PaConfig& c = *record.pa_config;
    j["type"] = "pa";
    j["initial_samples"] = c.initial_samples;
    j["layers"] = c.layers;
    j["new_per_layer"] = c.new_per_layer;
    j["eta"] = c.schedule.eta();
    j["lambda"] = c.schedule.lambda();
    j["xi_diag"] = std::vector<double>(c.schedule.xi_diag().begin(), c.schedule.xi_diag().end());
    j["init_cov_diag"] = matrix_diag(c.init_cov);
  }
  j["survival_estimator"] = "normalized-ess";
  const SurvivalEstimator estimator = record.apf_config   ? record.apf_config->survival
                                      : record.pa_config ? record.pa_config->survival
                                                         : SurvivalEstimator::NormalizedEss;
  if (estimator == SurvivalEstimator::ExpectedUnique) j["survival_estimator"] = "expected-unique";
  return j;
}

}  // namespace

nlohmann::json run_record_to_json(const RunRecord& record) {
  nlohmann::json j;
  j["method"] = record.method;
  j["seed"] = record.seed;
  j["config"] = config_snapshot(record);
  j["start_state"] = record.start_state;
  j["start_log_y"] = record.start_log_y;
  j["final_estimate"] = record.final_estimate;
  j["final_log_y"] = record.final_log_y;
  j["improvement"] = record.improvement;
  j["eval_count"] = record.eval_count;
  j["aux_eval_count"] = record.aux_eval_count;

  nlohmann::json layers;
  std::vector<double> beta, target_alpha, achieved_alpha;
  std::vector<int> sample_count, respawned, solve_iterations;
  std::vector<bool> saturated, identical;
  for (const LayerDiagnostics& diag : record.layers) {
    beta.push_back(diag.beta);
    target_alpha.push_back(diag.target_alpha);
    achieved_alpha.push_back(diag.achieved_alpha);
    sample_count.push_back(diag.sample_count);
    saturated.push_back(diag.saturated);
    identical.push_back(diag.identical_values);
    respawned.push_back(diag.respawned_components);
    solve_iterations.push_back(diag.solve_iterations);
  }
  layers["beta"] = beta;
  layers["target_alpha"] = target_alpha;
  layers["achieved_alpha"] = achieved_alpha;
  layers["sample_count"] = sample_count;
  layers["saturated"] = saturated;
  layers["identical_values"] = identical;
  layers["respawned_components"] = respawned;
  layers["solve_iterations"] = solve_iterations;
  j["layers"] = layers;
  return j;
}

MixtureOfGaussians mog_from_json(const nlohmann::json& j) {
  if (!j.contains("components") || !j.at("components").is_array()) {
    throw ConfigError("inline mixture: expected a 'components' array");
  }
  std::vector<MixtureOfGaussians::Init> inits;
  for (const auto& comp : j.at("components")) {
    MixtureOfGaussians::Init init;
    init.weight = comp.at("weight").get<double>();
    init.mean = comp.at("mean").get<Vector>();
    const int d = static_cast<int>(init.mean.size());
    if (comp.contains("covariance_diag")) {
      const auto diag = comp.at("covariance_diag").get<Vector>();
      if (static_cast<int>(diag.size()) != d) {
        throw ConfigError("inline mixture: covariance_diag size mismatch");
      }
      init.covariance = Matrix::diagonal(diag);
    } else {
      const auto rows = comp.at("covariance").get<std::vector<Vector>>();
      if (static_cast<int>(rows.size()) != d) {
        throw ConfigError("inline mixture: covariance must be d x d");
      }
      init.covariance = Matrix(d, d);
      for (int r = 0; r < d; ++r) {
        if (static_cast<int>(rows[r].size()) != d) {
          throw ConfigError("inline mixture: covariance must be d x d");
        }
        for (int c = 0; c < d; ++c) init.covariance(r, c) = rows[r][c];
      }
    }
    inits.push_back(std::move(init));
  }
  try {
    return MixtureOfGaussians(std::move(inits));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("inline mixture: ") + e.what());
  }
}

}  // namespace pa
