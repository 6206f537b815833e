#pragma once

#include <span>
#include <vector>

#include "pa/linalg.hpp"

namespace pa {

enum class ScheduleKind { ApfSimple, PaPowerLaw };

/// Layer-indexed survival-rate targets and regularizer matrices.
///
/// ApfSimple targets a constant 0.5 survival rate. PaPowerLaw targets
/// alpha_m = eta * lambda^m together with the shrinking diagonal regularizer
/// xi_m = alpha_m^2 * xi xi^T.
class AnnealingSchedule {
 public:
  static AnnealingSchedule apf_simple(int layers);
  static AnnealingSchedule pa_power_law(double eta, double lambda, int layers,
                                        Vector xi_diag);

  ScheduleKind kind() const { return kind_; }
  int layers() const { return layers_; }
  double eta() const { return eta_; }
  double lambda() const { return lambda_; }
  std::span<const double> xi_diag() const { return xi_diag_; }

  /// Survival-rate target for layer m in 1..layers.
  double alpha_at(int m) const;
  std::vector<double> alphas() const;

  /// Diagonal of xi_m = alpha_m^2 * xi xi^T for layer m in 1..layers.
  /// PaPowerLaw only; entries shrink monotonically in m.
  Vector regularizer_at(int m) const;

  bool operator==(const AnnealingSchedule&) const = default;

 private:
  AnnealingSchedule() = default;
  ScheduleKind kind_ = ScheduleKind::ApfSimple;
  double eta_ = 0.0;
  double lambda_ = 0.0;
  int layers_ = 0;
  Vector xi_diag_;
};

struct Temperature {
  double beta;  // beta_m = 1 / T_m, > 0 and finite
};

enum class SurvivalEstimator {
  NormalizedEss,  // ESS(beta)/N, the default
  ExpectedUnique  // E[#unique indices after N-fold resampling] / N
};

/// Normalized effective sample size of the weights exp(beta * l_i):
/// (sum w)^2 / (N * sum w^2), computed in the log domain. Equals 1 exactly
/// at beta = 0 for finite inputs; throws DegenerateWeights when every value
/// is -inf.
double survival_rate(std::span<const double> log_values, double beta);

/// Expected fraction of unique indices after resampling N times from the
/// normalized weights at `beta`. Offered for comparison with the
/// resampled-particle-count reading of the survival rate.
double unique_survival_rate(std::span<const double> log_values, double beta);

inline constexpr double kBetaMax = 1e6;
inline constexpr double kSolveTolerance = 1e-6;

struct TemperatureSolve {
  Temperature temperature;
  double achieved_alpha;
  bool saturated;         // target unreachable within (0, beta_max]
  bool identical_values;  // survival rate constant in beta; beta pinned at 1
  int iterations;
};

/// Finds beta with |survival(beta) - target_alpha| <= tolerance by bisection
/// on [0, beta_max]. When even beta_max cannot reach the target the result is
/// clamped and flagged saturated; identical log values pin beta at 1 with the
/// identical_values flag.
TemperatureSolve solve_temperature(std::span<const double> log_values, double target_alpha,
                                   SurvivalEstimator estimator = SurvivalEstimator::NormalizedEss,
                                   double beta_max = kBetaMax,
                                   double tolerance = kSolveTolerance);

}  // namespace pa
