// paranneal: annealed stochastic search over black-box objectives, with the
// benchmark studies (quadratic reuse, mixture scaling, parameter sensitivity)
// exposed as subcommands that emit plot-ready CSV/JSON tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pa/config.hpp"
#include "pa/io.hpp"
#include "pa/version.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "plan file (key=value format)");
  cmd->add_option("--out", args.out_dir, "output directory")->required();
  cmd->add_option("--seed", args.seed, "master seed override");
  cmd->add_option("--workers", args.workers, "worker threads (default: PA_WORKERS or cores)");
  cmd->add_option("--format", args.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

pa::ExperimentPlan resolve_plan(const CommonArgs& args, pa::PlanKind kind) {
  pa::ExperimentPlan plan;
  if (!args.config_path.empty()) {
    plan = pa::load_plan(args.config_path);
    if (plan.kind != kind) {
      throw pa::ConfigError(std::string("config kind '") + pa::plan_kind_name(plan.kind) +
                            "' does not match the subcommand");
    }
  } else {
    plan.kind = kind;
    plan.replicates = plan.resolved_replicates();
  }
  if (args.seed) plan.master_seed = *args.seed;
  return plan;
}

pa::EmitOptions prepare_output(const CommonArgs& args, const pa::ExperimentPlan& plan,
                               int workers) {
  pa::EmitOptions options{args.out_dir, args.format};
  std::filesystem::create_directories(options.out_dir);
  // Provenance first: no run starts before the resolved config is on disk.
  pa::emit_resolved_config(options, plan);
  pa::emit_metadata(options, plan, workers);
  return options;
}

int report_failures(const std::vector<pa::RunFailure>& failures) {
  if (failures.empty()) return 0;
  std::fprintf(stderr, "%zu replicate(s) failed:\n", failures.size());
  for (const auto& f : failures) {
    std::fprintf(stderr, "  sweep=%s grid=%d replicate=%d: %s\n", f.sweep.c_str(),
                 f.grid_index, f.replicate, f.message.c_str());
  }
  return 1;
}

int run_experiment(const CommonArgs& args, pa::PlanKind kind) {
  const pa::ExperimentPlan plan = resolve_plan(args, kind);
  const int workers = pa::resolve_workers(args.workers);
  const pa::EmitOptions options = prepare_output(args, plan, workers);

  std::vector<pa::RunFailure> failures;
  switch (kind) {
    case pa::PlanKind::QuadraticReuse: {
      const auto result = pa::run_quadratic_reuse(plan, workers);
      pa::emit_quadratic(options, result);
      failures = result.failures;
      break;
    }
    case pa::PlanKind::Scaling: {
      const auto result = pa::run_scaling(plan, workers);
      for (const auto& sweep : result.sweeps) pa::emit_sweep(options, sweep);
      failures = result.failures;
      break;
    }
    case pa::PlanKind::Sensitivity: {
      const auto result = pa::run_sensitivity(plan, workers);
      for (const auto& sweep : result.sweeps) pa::emit_sweep(options, sweep);
      failures = result.failures;
      break;
    }
  }
  std::printf("%s: %d replicates done, results in %s\n", pa::plan_kind_name(plan.kind),
              plan.resolved_replicates(), args.out_dir.c_str());
  return report_failures(failures);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annealed stochastic search benchmark suite"};
  app.set_version_flag("--version", PA_VERSION_STRING);
  app.require_subcommand(1);

  CommonArgs quadratic_args, scaling_args, sensitivity_args;
  add_common(app.add_subcommand("quadratic", "quadratic sample-reuse experiment"),
             quadratic_args);
  add_common(app.add_subcommand("scaling", "mixture scaling study over d, k, s"),
             scaling_args);
  add_common(app.add_subcommand("sensitivity", "PA parameter sensitivity sweeps"),
             sensitivity_args);

  pa::SingleRunSpec spec;
  std::string single_out;
  std::string mog_file;
  CLI::App* single = app.add_subcommand("single-run", "one diagnostic run, JSON record");
  single->add_option("--method", spec.method, "apf | apf-retain | apf-retain-deep | pa");
  single->add_option("--objective", spec.objective, "quadratic | mog | mog-inline");
  single->add_option("--mog-file", mog_file,
                     "JSON mixture for --objective mog-inline (components: weight, mean, "
                     "covariance or covariance_diag)");
  single->add_option("--dim", spec.dim, "objective dimension");
  single->add_option("--components", spec.components, "mixture components (mog)");
  single->add_option("--range-scale", spec.range_scale, "mixture range scale s (mog)");
  single->add_option("--objective-seed", spec.objective_seed, "seed of the mog draw");
  single->add_option("--seed", spec.seed, "run seed");
  single->add_option("--xi", spec.xi_scale, "width scale (default: s/2, quadratic: 1)");
  single->add_option("--layers", spec.apf.layers, "APF layers");
  single->add_option("--particles", spec.apf.particles, "APF particles per layer");
  single->add_option("--n0", spec.pa.initial_samples, "PA initial samples");
  single->add_option("--pa-layers", spec.pa.layers, "PA layers");
  single->add_option("--new-per-layer", spec.pa.new_per_layer, "PA samples added per layer");
  single->add_option("--eta", spec.pa.eta, "power-law eta");
  single->add_option("--lambda", spec.pa.lambda, "power-law lambda");
  single->add_option("--out", single_out, "write the JSON record here as well");

  CLI11_PARSE(app, argc, argv);

  try {
    if (single->parsed()) {
      if (!mog_file.empty()) {
        std::ifstream in(mog_file, std::ios::binary);
        if (!in) throw pa::IoError("cannot read mixture file: " + mog_file);
        spec.inline_objective = pa::mog_from_json(nlohmann::json::parse(in));
        spec.objective = "mog-inline";
      }
      const pa::RunRecord record = pa::single_run(spec);
      const std::string text = pa::run_record_to_json(record).dump(2) + "\n";
      std::fputs(text.c_str(), stdout);
      if (!single_out.empty()) {
        std::ofstream out(single_out, std::ios::binary | std::ios::trunc);
        if (!out) throw pa::IoError("cannot open for writing: " + single_out);
        out << text;
      }
      return 0;
    }
    if (app.get_subcommand("quadratic")->parsed()) {
      return run_experiment(quadratic_args, pa::PlanKind::QuadraticReuse);
    }
    if (app.get_subcommand("scaling")->parsed()) {
      return run_experiment(scaling_args, pa::PlanKind::Scaling);
    }
    return run_experiment(sensitivity_args, pa::PlanKind::Sensitivity);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
