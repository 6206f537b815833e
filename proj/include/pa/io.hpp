#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pa/benchmark.hpp"

namespace pa {

/// Shortest round-trip decimal representation ('.' decimal point, locale
/// independent).
std::string format_double(double value);

struct EmitOptions {
  std::filesystem::path out_dir;
  std::string format = "csv";  // csv | json
};

/// Writes the round-trippable resolved plan to resolved_config.cfg. Called
/// before any run starts.
void emit_resolved_config(const EmitOptions& options, const ExperimentPlan& plan);

/// Writes metadata.json: resolved config, master seed, library version,
/// SIMD backend, worker count and a timestamp. Also written before any run.
void emit_metadata(const EmitOptions& options, const ExperimentPlan& plan, int workers);

/// stats_<sweep>.<fmt> (grid value, method, mean/std of I, eval count,
/// replicates) plus raw_<sweep>.<fmt> with one row per replicate.
void emit_sweep(const EmitOptions& options, const SweepResult& sweep);

/// stats_quadratic.<fmt> plus one raw norms file per configuration.
void emit_quadratic(const EmitOptions& options, const QuadraticReuseResult& result);

nlohmann::json plan_to_json(const ExperimentPlan& plan);
nlohmann::json run_record_to_json(const RunRecord& record);

/// Mixture from {"components": [{"weight": w, "mean": [...],
/// "covariance": [[...]] | "covariance_diag": [...]}, ...]}.
MixtureOfGaussians mog_from_json(const nlohmann::json& j);

}  // namespace pa
