#include "pa/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pa/errors.hpp"
#include "pa/simd/kernels.hpp"

namespace pa {

std::vector<Vector> sample_gaussian(const GaussianParams& params, RngStream& rng, int n) {
  if (n < 1) throw std::invalid_argument("sample_gaussian: n must be >= 1");
  const int d = params.dim();
  const CholeskyFactor factor = cholesky_with_jitter(params.covariance);
  std::vector<Vector> draws(n, Vector(d));
  Vector z(d);
  for (auto& x : draws) {
    sample_mvn(params.mean, factor.lower, 1.0, rng, x, z);
  }
  return draws;
}

void sample_mvn(std::span<const double> mean, const Matrix& chol_lower, double scale,
                RngStream& rng, std::span<double> out, std::span<double> z_buffer) {
  const int d = static_cast<int>(mean.size());
  rng.fill_normal(z_buffer);
  const auto& k = simd::active_kernels();
  for (int i = 0; i < d; ++i) {
    out[i] = mean[i] + scale * k.dot(chol_lower.row(i), z_buffer.data(),
                                     static_cast<std::size_t>(i) + 1);
  }
}

std::vector<double> normalize_weights(std::span<const double> log_values, double beta) {
  const double max_log = simd::reduce_max(log_values);
  if (max_log == -std::numeric_limits<double>::infinity()) {
    throw DegenerateWeights("normalize_weights: every log value is -inf");
  }
  std::vector<double> weights(log_values.size());
  const double sum = simd::exp_weights(log_values, beta, max_log, weights);
  const double inv = 1.0 / sum;
  for (double& w : weights) w *= inv;
  return weights;
}

std::vector<std::size_t> resample_multinomial(std::span<const double> weights,
                                              RngStream& rng, std::size_t n) {
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cdf[i] = acc;
  }
  std::vector<std::size_t> indices(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    indices[j] = std::min<std::size_t>(it - cdf.begin(), weights.size() - 1);
  }
  return indices;
}

std::vector<std::size_t> resample_multinomial(const WeightedSampleSet& set, RngStream& rng,
                                              std::size_t n) {
  if (!set.normalized()) {
    throw std::logic_error("resample_multinomial: weights not normalized");
  }
  return resample_multinomial(set.weights(), rng, n);
}

std::vector<std::size_t> resample_systematic(std::span<const double> weights,
                                             RngStream& rng, std::size_t n) {
  std::vector<std::size_t> indices(n);
  const double step = 1.0 / static_cast<double>(n);
  double position = rng.uniform() * step;
  double acc = weights.empty() ? 0.0 : weights[0];
  std::size_t i = 0;
  for (std::size_t j = 0; j < n; ++j) {
    while (acc < position && i + 1 < weights.size()) acc += weights[++i];
    indices[j] = i;
    position += step;
  }
  return indices;
}

std::vector<std::size_t> resample(std::span<const double> weights, RngStream& rng,
                                  std::size_t n, ResamplingScheme scheme) {
  return scheme == ResamplingScheme::Systematic ? resample_systematic(weights, rng, n)
                                                : resample_multinomial(weights, rng, n);
}

}  // namespace pa
