#include "pa/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

#include "pa/simd/kernels.hpp"

namespace pa {

namespace {

// Salts separating the seed streams of unrelated purposes.
constexpr std::uint64_t kQuadraticSalt = 0x71;
constexpr std::uint64_t kScalingSalt = 0x5c;
constexpr std::uint64_t kSensitivitySalt = 0x5e;
constexpr std::uint64_t kObjectivePurpose = 0;
constexpr std::uint64_t kRunPurpose = 1;

}  // namespace

int ExperimentPlan::resolved_replicates() const {
  if (replicates > 0) return replicates;
  return kind == PlanKind::QuadraticReuse ? 200 : 100;
}

const char* plan_kind_name(PlanKind kind) {
  switch (kind) {
    case PlanKind::QuadraticReuse: return "quadratic";
    case PlanKind::Scaling: return "scaling";
    case PlanKind::Sensitivity: return "sensitivity";
  }
  return "unknown";
}

std::vector<MethodStats> SweepResult::stats() const {
  std::vector<MethodStats> out;
  for (std::size_t g = 0; g < grid_values.size(); ++g) {
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const auto& values = improvements[g][m];
      const double mean = mean_of(values);
      MethodStats s;
      s.method = methods[m];
      s.grid_value = grid_values[g];
      s.mean_improvement = mean;
      s.std_improvement = stddev_of(values, mean);
      s.std_degenerate = values.size() < 2;
      double eval_mean = 0.0;
      for (const auto e : eval_counts[g][m]) eval_mean += static_cast<double>(e);
      s.mean_eval_count = eval_counts[g][m].empty() ? 0.0 : eval_mean / eval_counts[g][m].size();
      s.replicates = static_cast<int>(values.size());
      out.push_back(std::move(s));
    }
  }
  return out;
}

const std::vector<double>& SweepResult::raw(std::size_t grid_index,
                                            const std::string& method) const {
  for (std::size_t m = 0; m < methods.size(); ++m) {
    if (methods[m] == method) return improvements[grid_index][m];
  }
  throw std::out_of_range("SweepResult::raw: unknown method " + method);
}

double default_xi_scale(double range_scale) { return range_scale / 2.0; }

ApfConfig make_apf_config(const ApfSettings& settings, int dim, double xi_scale) {
  ApfConfig config;
  config.particles_per_layer = settings.particles;
  config.layers = settings.layers;
  config.decay_alpha = settings.decay;
  config.diffusion_cov = Matrix::scaled_identity(dim, xi_scale * xi_scale);
  return config;
}

PaConfig make_pa_config(const PaSettings& settings, int dim, double xi_scale) {
  PaConfig config;
  config.initial_samples = settings.initial_samples;
  config.layers = settings.layers;
  config.new_per_layer = settings.new_per_layer;
  config.schedule = AnnealingSchedule::pa_power_law(settings.eta, settings.lambda,
                                                    settings.layers, Vector(dim, xi_scale));
  config.init_cov = Matrix::scaled_identity(dim, xi_scale * xi_scale);
  return config;
}

MixtureOfGaussians draw_objective(int d, int k, double s, std::uint64_t objective_seed) {
  RngStream rng(objective_seed);
  return draw_benchmark_objective({d, k, s}, rng);
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (const double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

double stddev_of(std::span<const double> values, double mean) {
  if (values.size() < 2) return 0.0;
  double acc = 0.0;
  for (const double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double paired_fraction_less(std::span<const double> a, std::span<const double> b) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) ++count;
  }
  return a.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(a.size());
}

double paired_fraction_ge(std::span<const double> a, std::span<const double> b) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= b[i]) ++count;
  }
  return a.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(a.size());
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PA_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn) {
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Quadratic reuse experiment.
// ---------------------------------------------------------------------------

QuadraticReuseResult run_quadratic_reuse(const ExperimentPlan& plan, int workers) {
  const QuadraticReusePlan& q = plan.quadratic;
  const int reps = plan.resolved_replicates();
  const int d = q.dim;
  const Vector start(d, q.start_scale);

  QuadraticReuseResult result;
  result.configurations = {"discard", "retain", "retain-deep"};
  result.final_norms.assign(3, std::vector<double>(reps, 0.0));
  result.improvements.assign(3, std::vector<double>(reps, 0.0));
  std::vector<std::string> errors(reps);

  const ApfConfig apf_config = make_apf_config(q.apf, d, q.xi_scale);
  const AnnealingSchedule deep = AnnealingSchedule::pa_power_law(
      q.deep_eta, q.deep_lambda, q.apf.layers, Vector(d, q.xi_scale));

  parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t rep) {
    try {
      for (int cfg = 0; cfg < 3; ++cfg) {
        ObjectiveSpec objective = make_quadratic_objective(d);
        RngStream rng(derive_seed(plan.master_seed, {kQuadraticSalt, rep, kRunPurpose}));
        RunRecord record =
            cfg == 0   ? run_apf(objective, start, apf_config, rng)
            : cfg == 1 ? run_apf_retain(objective, start, apf_config, rng)
                       : run_apf_retain(objective, start, apf_config, rng, deep);
        result.final_norms[cfg][rep] =
            std::sqrt(simd::dot(record.final_estimate, record.final_estimate));
        result.improvements[cfg][rep] = record.improvement;
      }
    } catch (const std::exception& e) {
      errors[rep] = e.what();
    }
  });

  for (int rep = 0; rep < reps; ++rep) {
    if (!errors[rep].empty()) {
      result.failures.push_back({"quadratic", 0, rep, errors[rep]});
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Scaling study over d, k, s.
// ---------------------------------------------------------------------------

namespace {

struct GridPoint {
  int d;
  int k;
  double s;
};

SweepResult run_scaling_sweep(const ExperimentPlan& plan, std::uint64_t sweep_id,
                              const std::string& name,
                              const std::vector<double>& grid_values,
                              const std::function<GridPoint(double)>& point_of, int workers,
                              std::vector<RunFailure>& failures) {
  const ScalingPlan& sc = plan.scaling;
  const int reps = plan.resolved_replicates();

  SweepResult sweep;
  sweep.sweep_name = name;
  sweep.grid_values = grid_values;
  sweep.methods = {"pa-438", "apf-500", "apf-1000"};
  const std::size_t n_grid = grid_values.size();
  sweep.improvements.assign(n_grid, std::vector<std::vector<double>>(
                                        3, std::vector<double>(reps, 0.0)));
  sweep.eval_counts.assign(n_grid, std::vector<std::vector<std::uint64_t>>(
                                       3, std::vector<std::uint64_t>(reps, 0)));
  std::vector<std::string> errors(n_grid * reps);

  parallel_for(n_grid * reps, workers, [&](std::size_t item) {
    const std::size_t g = item / reps;
    const std::size_t rep = item % reps;
    try {
      const GridPoint point = point_of(grid_values[g]);
      const std::uint64_t obj_seed =
          derive_seed(plan.master_seed, {kScalingSalt, sweep_id, g, rep, kObjectivePurpose});
      const std::uint64_t run_seed =
          derive_seed(plan.master_seed, {kScalingSalt, sweep_id, g, rep, kRunPurpose});
      const MixtureOfGaussians mixture = draw_objective(point.d, point.k, point.s, obj_seed);
      const Vector origin(point.d, 0.0);
      const double xi = default_xi_scale(point.s);

      const PaConfig pa_config = make_pa_config(plan.pa, point.d, xi);
      const ApfConfig apf500 = make_apf_config(plan.apf500, point.d, xi);
      const ApfConfig apf1000 = make_apf_config(plan.apf1000, point.d, xi);

      for (int m = 0; m < 3; ++m) {
        ObjectiveSpec objective = make_mog_objective(mixture);
        RngStream rng(run_seed);
        const RunRecord record = m == 0   ? run_pa(objective, origin, pa_config, rng)
                                 : m == 1 ? run_apf(objective, origin, apf500, rng)
                                          : run_apf(objective, origin, apf1000, rng);
        sweep.improvements[g][m][rep] = record.improvement;
        sweep.eval_counts[g][m][rep] = record.eval_count;
      }
    } catch (const std::exception& e) {
      errors[item] = e.what();
    }
  });

  for (std::size_t item = 0; item < errors.size(); ++item) {
    if (!errors[item].empty()) {
      failures.push_back({name, static_cast<int>(item / reps),
                          static_cast<int>(item % reps), errors[item]});
    }
  }
  return sweep;
}

}  // namespace

ScalingResult run_scaling(const ExperimentPlan& plan, int workers) {
  const ScalingPlan& sc = plan.scaling;
  ScalingResult result;

  std::vector<double> d_values(sc.d_grid.begin(), sc.d_grid.end());
  std::vector<double> k_values(sc.k_grid.begin(), sc.k_grid.end());

  result.sweeps.push_back(run_scaling_sweep(
      plan, 0, "d", d_values,
      [&](double v) { return GridPoint{static_cast<int>(v), sc.base_k, sc.base_s}; }, workers,
      result.failures));
  result.sweeps.push_back(run_scaling_sweep(
      plan, 1, "k", k_values,
      [&](double v) { return GridPoint{sc.base_d, static_cast<int>(v), sc.base_s}; }, workers,
      result.failures));
  result.sweeps.push_back(run_scaling_sweep(
      plan, 2, "s", sc.s_grid,
      [&](double v) { return GridPoint{sc.base_d, sc.base_k, v}; }, workers,
      result.failures));
  return result;
}

// ---------------------------------------------------------------------------
// Sensitivity analysis over eta, lambda, N0, M, C.
// ---------------------------------------------------------------------------

namespace {

SweepResult run_sensitivity_sweep(const ExperimentPlan& plan, std::uint64_t sweep_id,
                                  const std::string& name,
                                  const std::vector<double>& grid_values,
                                  const std::function<PaSettings(double)>& settings_of,
                                  int workers, std::vector<RunFailure>& failures) {
  const SensitivityPlan& se = plan.sensitivity;
  const int reps = plan.resolved_replicates();

  SweepResult sweep;
  sweep.sweep_name = name;
  sweep.grid_values = grid_values;
  sweep.methods = {"pa"};
  const std::size_t n_grid = grid_values.size();
  sweep.improvements.assign(n_grid, std::vector<std::vector<double>>(
                                        1, std::vector<double>(reps, 0.0)));
  sweep.eval_counts.assign(n_grid, std::vector<std::vector<std::uint64_t>>(
                                       1, std::vector<std::uint64_t>(reps, 0)));
  std::vector<std::string> errors(n_grid * reps);

  // Objective and run seeds are shared across the grid: replicate r sees the
  // same mixture at every sweep value, so adjacent values pair cleanly.
  parallel_for(n_grid * reps, workers, [&](std::size_t item) {
    const std::size_t g = item / reps;
    const std::size_t rep = item % reps;
    try {
      const std::uint64_t obj_seed =
          derive_seed(plan.master_seed, {kSensitivitySalt, sweep_id, rep, kObjectivePurpose});
      const std::uint64_t run_seed =
          derive_seed(plan.master_seed, {kSensitivitySalt, sweep_id, rep, kRunPurpose});
      const MixtureOfGaussians mixture =
          draw_objective(se.objective_d, se.objective_k, se.objective_s, obj_seed);
      const Vector origin(se.objective_d, 0.0);
      const double xi = default_xi_scale(se.objective_s);

      const PaConfig config =
          make_pa_config(settings_of(grid_values[g]), se.objective_d, xi);
      ObjectiveSpec objective = make_mog_objective(mixture);
      RngStream rng(run_seed);
      const RunRecord record = run_pa(objective, origin, config, rng);
      sweep.improvements[g][0][rep] = record.improvement;
      sweep.eval_counts[g][0][rep] = record.eval_count;
    } catch (const std::exception& e) {
      errors[item] = e.what();
    }
  });

  for (std::size_t item = 0; item < errors.size(); ++item) {
    if (!errors[item].empty()) {
      failures.push_back({name, static_cast<int>(item / reps),
                          static_cast<int>(item % reps), errors[item]});
    }
  }
  return sweep;
}

}  // namespace

SensitivityResult run_sensitivity(const ExperimentPlan& plan, int workers) {
  const SensitivityPlan& se = plan.sensitivity;
  SensitivityResult result;

  const auto as_doubles = [](const std::vector<int>& v) {
    return std::vector<double>(v.begin(), v.end());
  };

  result.sweeps.push_back(run_sensitivity_sweep(
      plan, 0, "eta", se.eta_sweep,
      [&](double v) { PaSettings s = plan.pa; s.eta = v; return s; }, workers,
      result.failures));
  result.sweeps.push_back(run_sensitivity_sweep(
      plan, 1, "lambda", se.lambda_sweep,
      [&](double v) { PaSettings s = plan.pa; s.lambda = v; return s; }, workers,
      result.failures));
  result.sweeps.push_back(run_sensitivity_sweep(
      plan, 2, "n0", as_doubles(se.n0_sweep),
      [&](double v) { PaSettings s = plan.pa; s.initial_samples = static_cast<int>(v); return s; },
      workers, result.failures));
  result.sweeps.push_back(run_sensitivity_sweep(
      plan, 3, "layers", as_doubles(se.layers_sweep),
      [&](double v) { PaSettings s = plan.pa; s.layers = static_cast<int>(v); return s; },
      workers, result.failures));
  result.sweeps.push_back(run_sensitivity_sweep(
      plan, 4, "c", as_doubles(se.c_sweep),
      [&](double v) { PaSettings s = plan.pa; s.new_per_layer = static_cast<int>(v); return s; },
      workers, result.failures));
  return result;
}

// ---------------------------------------------------------------------------
// Single diagnostic run.
// ---------------------------------------------------------------------------

const std::vector<std::string>& single_run_methods() {
  static const std::vector<std::string> methods{"apf", "apf-retain", "apf-retain-deep", "pa"};
  return methods;
}

RunRecord single_run(const SingleRunSpec& spec) {
  const bool quadratic = spec.objective == "quadratic";
  const bool inline_mog = spec.objective == "mog-inline";
  if (!quadratic && !inline_mog && spec.objective != "mog") {
    throw std::invalid_argument(
        "single_run: objective must be one of: quadratic, mog, mog-inline");
  }
  if (inline_mog && !spec.inline_objective) {
    throw std::invalid_argument("single_run: mog-inline requires an explicit mixture");
  }
  const int d = inline_mog ? spec.inline_objective->dim() : spec.dim;
  double xi = spec.xi_scale;
  if (xi <= 0.0) xi = quadratic ? 1.0 : default_xi_scale(spec.range_scale);

  ObjectiveSpec objective =
      quadratic   ? make_quadratic_objective(d)
      : inline_mog ? make_mog_objective(*spec.inline_objective)
                   : make_mog_objective(
                         draw_objective(d, spec.components, spec.range_scale, spec.objective_seed));
  const Vector origin(d, 0.0);
  RngStream rng(spec.seed);

  if (spec.method == "pa") {
    return run_pa(objective, origin, make_pa_config(spec.pa, d, xi), rng);
  }
  if (spec.method == "apf") {
    return run_apf(objective, origin, make_apf_config(spec.apf, d, xi), rng);
  }
  if (spec.method == "apf-retain") {
    return run_apf_retain(objective, origin, make_apf_config(spec.apf, d, xi), rng);
  }
  if (spec.method == "apf-retain-deep") {
    const AnnealingSchedule deep = AnnealingSchedule::pa_power_law(
        spec.pa.eta, spec.pa.lambda, spec.apf.layers, Vector(d, xi));
    return run_apf_retain(objective, origin, make_apf_config(spec.apf, d, xi), rng, deep);
  }
  std::string valid;
  for (const auto& name : single_run_methods()) {
    if (!valid.empty()) valid += ", ";
    valid += name;
  }
  throw std::invalid_argument("single_run: unknown method '" + spec.method +
                              "'; valid methods: " + valid);
}

}  // namespace pa
