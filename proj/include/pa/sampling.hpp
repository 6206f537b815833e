#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pa/rng.hpp"
#include "pa/sample_set.hpp"

namespace pa {

/// n i.i.d. draws from N(params.mean, params.covariance). The covariance is
/// factorized once under the jitter policy; throws SingularCovariance when
/// that fails.
std::vector<Vector> sample_gaussian(const GaussianParams& params, RngStream& rng, int n);

/// One draw x = mean + scale * L z into `out`; `z_buffer` must have dim
/// elements. The scale lets callers reuse one factor for c * Sigma kernels.
void sample_mvn(std::span<const double> mean, const Matrix& chol_lower, double scale,
                RngStream& rng, std::span<double> out, std::span<double> z_buffer);

/// pi_i proportional to exp(beta * log_y_i), computed in the log domain via
/// max-subtraction. -inf entries get weight zero; all -inf throws
/// DegenerateWeights.
std::vector<double> normalize_weights(std::span<const double> log_values, double beta);

enum class ResamplingScheme { Multinomial, Systematic };

/// n indices drawn i.i.d. with probability weights[i] (weights normalized).
std::vector<std::size_t> resample_multinomial(std::span<const double> weights,
                                              RngStream& rng, std::size_t n);
std::vector<std::size_t> resample_multinomial(const WeightedSampleSet& set, RngStream& rng,
                                              std::size_t n);

/// Systematic (low-variance) resampling; one uniform for the whole sweep.
/// Off by default everywhere, available as a configuration option.
std::vector<std::size_t> resample_systematic(std::span<const double> weights,
                                             RngStream& rng, std::size_t n);

std::vector<std::size_t> resample(std::span<const double> weights, RngStream& rng,
                                  std::size_t n, ResamplingScheme scheme);

}  // namespace pa
