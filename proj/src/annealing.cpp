#include "pa/annealing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pa/errors.hpp"
#include "pa/sampling.hpp"
#include "pa/simd/kernels.hpp"

namespace pa {

AnnealingSchedule AnnealingSchedule::apf_simple(int layers) {
  if (layers < 1) throw std::invalid_argument("AnnealingSchedule: layers must be >= 1");
  AnnealingSchedule s;
  s.kind_ = ScheduleKind::ApfSimple;
  s.layers_ = layers;
  return s;
}

AnnealingSchedule AnnealingSchedule::pa_power_law(double eta, double lambda, int layers,
                                                  Vector xi_diag) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw std::invalid_argument("AnnealingSchedule: eta must be in (0,1)");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("AnnealingSchedule: lambda must be in (0,1)");
  }
  if (layers < 1) throw std::invalid_argument("AnnealingSchedule: layers must be >= 1");
  if (xi_diag.empty()) throw std::invalid_argument("AnnealingSchedule: xi is empty");
  for (const double v : xi_diag) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("AnnealingSchedule: xi entries must be positive");
    }
  }
  AnnealingSchedule s;
  s.kind_ = ScheduleKind::PaPowerLaw;
  s.eta_ = eta;
  s.lambda_ = lambda;
  s.layers_ = layers;
  s.xi_diag_ = std::move(xi_diag);
  return s;
}

double AnnealingSchedule::alpha_at(int m) const {
  if (m < 1 || m > layers_) throw std::out_of_range("AnnealingSchedule: layer out of range");
  if (kind_ == ScheduleKind::ApfSimple) return 0.5;
  return eta_ * std::pow(lambda_, m);
}

std::vector<double> AnnealingSchedule::alphas() const {
  std::vector<double> out(layers_);
  for (int m = 1; m <= layers_; ++m) out[m - 1] = alpha_at(m);
  return out;
}

Vector AnnealingSchedule::regularizer_at(int m) const {
  if (kind_ != ScheduleKind::PaPowerLaw) {
    throw std::logic_error("regularizer_at: schedule has no regularizer");
  }
  const double alpha = alpha_at(m);
  Vector diag(xi_diag_.size());
  for (std::size_t j = 0; j < xi_diag_.size(); ++j) {
    const double scaled = alpha * xi_diag_[j];
    diag[j] = scaled * scaled;
  }
  return diag;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct FiniteSummary {
  std::size_t finite = 0;
  double min = std::numeric_limits<double>::infinity();
  double max = kNegInf;
};

FiniteSummary summarize(std::span<const double> log_values) {
  FiniteSummary s;
  for (const double v : log_values) {
    if (v == kNegInf) continue;
    ++s.finite;
    if (v < s.min) s.min = v;
    if (v > s.max) s.max = v;
  }
  return s;
}

}  // namespace

double survival_rate(std::span<const double> log_values, double beta) {
  const double max_log = simd::reduce_max(log_values);
  if (max_log == kNegInf) throw DegenerateWeights("survival_rate: every log value is -inf");
  const auto [sum, sum_sq] = simd::exp_sums(log_values, beta, max_log);
  const double ess = sum * sum / sum_sq;
  return ess / static_cast<double>(log_values.size());
}

double unique_survival_rate(std::span<const double> log_values, double beta) {
  const std::vector<double> pi = normalize_weights(log_values, beta);
  const double n = static_cast<double>(pi.size());
  double expected_unique = 0.0;
  for (const double p : pi) expected_unique += 1.0 - std::pow(1.0 - p, n);
  return expected_unique / n;
}

TemperatureSolve solve_temperature(std::span<const double> log_values, double target_alpha,
                                   SurvivalEstimator estimator, double beta_max,
                                   double tolerance) {
  if (!(target_alpha > 0.0 && target_alpha < 1.0)) {
    throw std::invalid_argument("solve_temperature: target_alpha must be in (0,1)");
  }
  const auto rate = [&](double beta) {
    return estimator == SurvivalEstimator::NormalizedEss
               ? survival_rate(log_values, beta)
               : unique_survival_rate(log_values, beta);
  };

  const FiniteSummary summary = summarize(log_values);
  if (summary.finite == 0) {
    throw DegenerateWeights("solve_temperature: every log value is -inf");
  }
  if (summary.max == summary.min) {
    // Weights cannot move: the rate is constant in beta.
    return {{1.0}, rate(1.0), false, true, 0};
  }

  const double rate_hi = rate(beta_max);
  if (rate_hi > target_alpha) {
    return {{beta_max}, rate_hi, true, false, 0};
  }
  const double rate_lo = rate(0.0);
  if (rate_lo < target_alpha) {
    // Only possible with -inf entries (or the unique estimator) capping the
    // rate below the target already at infinite temperature.
    return {{1e-12}, rate_lo, true, false, 0};
  }

  double lo = 0.0;
  double hi = beta_max;
  double best_beta = 1.0;
  double best_rate = rate_lo;
  for (int iter = 1; iter <= 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double r = rate(mid);
    if (std::abs(r - target_alpha) < std::abs(best_rate - target_alpha)) {
      best_beta = mid;
      best_rate = r;
    }
    if (std::abs(r - target_alpha) <= tolerance) {
      return {{mid}, r, false, false, iter};
    }
    if (r > target_alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {{best_beta}, best_rate, false, false, 200};
}

}  // namespace pa
