#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pa/linalg.hpp"

namespace pa {

/// Mean and covariance of a multivariate normal. The covariance must be
/// symmetric (1e-10 relative) and factorizable under the jitter policy by
/// the time it is sampled from.
struct GaussianParams {
  Vector mean;
  Matrix covariance;

  GaussianParams(Vector mean_in, Matrix covariance_in);
  int dim() const { return static_cast<int>(mean.size()); }
};

/// Samples x_i with their raw log-objective values and, once normalized,
/// annealed weights pi_i. Storage is flat row-major so the weight kernels
/// can run over contiguous memory.
class WeightedSampleSet {
 public:
  WeightedSampleSet() = default;
  explicit WeightedSampleSet(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return log_y_.size(); }
  void reserve(std::size_t n);

  /// Appends a sample; log_value must be finite or -inf. Invalidates weights.
  void add(std::span<const double> x, double log_value);

  std::span<const double> sample(std::size_t i) const {
    return {xs_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  double log_value(std::size_t i) const { return log_y_[i]; }
  double weight(std::size_t i) const { return pi_[i]; }

  std::span<const double> log_values() const { return log_y_; }
  std::span<const double> weights() const { return pi_; }
  const std::vector<double>& samples_flat() const { return xs_; }

  bool normalized() const { return normalized_; }

  /// Installs normalized weights: size must match, entries >= 0, sum within
  /// 1e-9 of one.
  void set_weights(std::vector<double> weights);
  void invalidate_weights();

  /// Sum of pi_i * x_i; requires normalized weights.
  Vector weighted_mean() const;

 private:
  int dim_ = 0;
  std::vector<double> xs_;
  std::vector<double> log_y_;
  std::vector<double> pi_;
  bool normalized_ = false;
};

}  // namespace pa
