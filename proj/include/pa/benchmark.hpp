#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pa/optimizers.hpp"

namespace pa {

// ---------------------------------------------------------------------------
// Plans. Every field has a default, so a minimal config resolves to a full
// plan; the serializer writes all of them back out.
// ---------------------------------------------------------------------------

struct ApfSettings {
  int layers = 5;
  int particles = 200;
  double decay = 0.5;
  bool operator==(const ApfSettings&) const = default;
};

struct PaSettings {
  int initial_samples = 150;
  int layers = 24;
  int new_per_layer = 12;
  double eta = 0.5;
  double lambda = 0.9;
  bool operator==(const PaSettings&) const = default;
};

/// Fixed quadratic objective -x.x/2; compares APF configurations that
/// discard samples, retain them, and retain them under a deep power-law
/// schedule, from a fixed start state.
struct QuadraticReusePlan {
  int dim = 30;
  double start_scale = 1.0;  // start state = start_scale * (1, ..., 1)
  double xi_scale = 1.0;     // diffusion Sigma = xi_scale^2 * I
  ApfSettings apf{5, 200, 0.5};
  // Five layers need a faster-decaying power law to reach depths comparable
  // to the long-run schedule (0.5 * 0.65^5 ~ 0.06).
  double deep_eta = 0.5;
  double deep_lambda = 0.65;
  bool operator==(const QuadraticReusePlan&) const = default;
};

/// Random-mixture objectives drawn from the generative prior; sweeps
/// dimension d, component count k and range scale s one at a time around a
/// base point, comparing PA against two APF budgets with paired seeds.
struct ScalingPlan {
  std::vector<int> d_grid{2, 5, 10, 20, 30};
  std::vector<int> k_grid{1, 2, 5, 10, 20};
  std::vector<double> s_grid{1, 2, 5, 10, 20};
  int base_d = 10;
  int base_k = 5;
  double base_s = 5;
  bool operator==(const ScalingPlan&) const = default;
};

/// One-at-a-time sweeps of the PA parameters around their defaults (the
/// plan-level [pa] settings), on the base mixture objective.
struct SensitivityPlan {
  int objective_d = 10;
  int objective_k = 5;
  double objective_s = 5;
  std::vector<double> eta_sweep{0.3, 0.4, 0.5, 0.6, 0.7};
  std::vector<double> lambda_sweep{0.80, 0.85, 0.90, 0.95, 0.975};
  // Ratio ladders: adjacent steps must carry an effect detectable by a
  // paired sign test at the default replicate count.
  std::vector<int> n0_sweep{50, 100, 200, 400, 800};
  std::vector<int> layers_sweep{6, 12, 18, 24, 30};
  std::vector<int> c_sweep{2, 4, 8, 24};
  bool operator==(const SensitivityPlan&) const = default;
};

enum class PlanKind { QuadraticReuse, Scaling, Sensitivity };

struct ExperimentPlan {
  PlanKind kind = PlanKind::Scaling;
  std::uint64_t master_seed = 1;
  int replicates = 0;  // 0 resolves to the per-kind default below
  ApfSettings apf1000{5, 200, 0.5};
  ApfSettings apf500{5, 100, 0.5};
  PaSettings pa{};  // scaling's PA method and sensitivity's base
  QuadraticReusePlan quadratic{};
  ScalingPlan scaling{};
  SensitivityPlan sensitivity{};

  int resolved_replicates() const;
  bool operator==(const ExperimentPlan&) const = default;
};

const char* plan_kind_name(PlanKind kind);

// ---------------------------------------------------------------------------
// Results.
// ---------------------------------------------------------------------------

struct MethodStats {
  std::string method;
  double grid_value;
  double mean_improvement;
  double std_improvement;
  bool std_degenerate;  // true when replicates == 1 (std reported as 0)
  double mean_eval_count;
  int replicates;
};

struct SweepResult {
  std::string sweep_name;  // "d", "k", "s", "eta", "lambda", "n0", "layers", "c"
  std::vector<double> grid_values;
  std::vector<std::string> methods;
  // improvements[grid][method][replicate]
  std::vector<std::vector<std::vector<double>>> improvements;
  std::vector<std::vector<std::vector<std::uint64_t>>> eval_counts;

  std::vector<MethodStats> stats() const;
  const std::vector<double>& raw(std::size_t grid_index, const std::string& method) const;
};

struct RunFailure {
  std::string sweep;
  int grid_index;
  int replicate;
  std::string message;
};

struct QuadraticReuseResult {
  std::vector<std::string> configurations;         // discard, retain, retain-deep
  std::vector<std::vector<double>> final_norms;    // [config][replicate]
  std::vector<std::vector<double>> improvements;   // [config][replicate]
  std::vector<RunFailure> failures;
};

struct ScalingResult {
  std::vector<SweepResult> sweeps;  // d, k, s
  std::vector<RunFailure> failures;
};

struct SensitivityResult {
  std::vector<SweepResult> sweeps;  // eta, lambda, n0, layers, c
  std::vector<RunFailure> failures;
};

// ---------------------------------------------------------------------------
// Experiment drivers. Replicates x grid points are independent work items
// spread over `workers` threads; seeds derive from (master, sweep, grid,
// replicate) only, so results do not depend on the worker count.
// ---------------------------------------------------------------------------

QuadraticReuseResult run_quadratic_reuse(const ExperimentPlan& plan, int workers);
ScalingResult run_scaling(const ExperimentPlan& plan, int workers);
SensitivityResult run_sensitivity(const ExperimentPlan& plan, int workers);

// ---------------------------------------------------------------------------
// Config materialization shared by the drivers, the CLI and the tests.
// ---------------------------------------------------------------------------

/// Diffusion/width scale used for mixture objectives with range scale s.
double default_xi_scale(double range_scale);

ApfConfig make_apf_config(const ApfSettings& settings, int dim, double xi_scale);
PaConfig make_pa_config(const PaSettings& settings, int dim, double xi_scale);

/// Objective drawn from the benchmark prior with a seed of its own.
MixtureOfGaussians draw_objective(int d, int k, double s, std::uint64_t objective_seed);

// ---------------------------------------------------------------------------
// Single diagnostic run (CLI `single-run`).
// ---------------------------------------------------------------------------

struct SingleRunSpec {
  std::string method = "pa";        // apf | apf-retain | apf-retain-deep | pa
  std::string objective = "quadratic";  // quadratic | mog | mog-inline
  int dim = 10;
  int components = 5;
  double range_scale = 5.0;
  std::uint64_t objective_seed = 0;
  std::uint64_t seed = 1;
  double xi_scale = 0.0;  // <= 0 resolves to default_xi_scale / 1.0 for quadratic
  ApfSettings apf{};
  PaSettings pa{};
  // Explicit objective for "mog-inline" (e.g. parsed from JSON by the CLI).
  std::optional<MixtureOfGaussians> inline_objective;
};

const std::vector<std::string>& single_run_methods();
RunRecord single_run(const SingleRunSpec& spec);

// ---------------------------------------------------------------------------
// Small statistics helpers (paired sign tests, summary stats).
// ---------------------------------------------------------------------------

double mean_of(std::span<const double> values);
/// Unbiased (n-1) standard deviation; 0 for n < 2.
double stddev_of(std::span<const double> values, double mean);
double median_of(std::vector<double> values);

/// Fraction of paired replicates where a[i] < b[i].
double paired_fraction_less(std::span<const double> a, std::span<const double> b);
/// Fraction of paired replicates where a[i] >= b[i].
double paired_fraction_ge(std::span<const double> a, std::span<const double> b);

/// Worker-count resolution: request > 0 wins, then PA_WORKERS, then the
/// hardware concurrency.
int resolve_workers(int requested);

/// Runs fn(0..count-1) across `workers` threads. fn must not throw.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace pa
