#include "pa/sample_set.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pa/simd/kernels.hpp"

namespace pa {

GaussianParams::GaussianParams(Vector mean_in, Matrix covariance_in)
    : mean(std::move(mean_in)), covariance(std::move(covariance_in)) {
  if (covariance.rows() != covariance.cols() ||
      covariance.rows() != static_cast<int>(mean.size())) {
    throw std::invalid_argument("GaussianParams: mean/covariance dimensions disagree");
  }
  if (!is_symmetric(covariance)) {
    throw std::invalid_argument("GaussianParams: covariance is not symmetric");
  }
}

void WeightedSampleSet::reserve(std::size_t n) {
  xs_.reserve(n * dim_);
  log_y_.reserve(n);
  pi_.reserve(n);
}

void WeightedSampleSet::add(std::span<const double> x, double log_value) {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("WeightedSampleSet::add: wrong sample dimension");
  }
  if (std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("WeightedSampleSet::add: log value must be finite or -inf");
  }
  xs_.insert(xs_.end(), x.begin(), x.end());
  log_y_.push_back(log_value);
  pi_.push_back(0.0);
  normalized_ = false;
}

void WeightedSampleSet::set_weights(std::vector<double> weights) {
  if (weights.size() != log_y_.size()) {
    throw std::invalid_argument("WeightedSampleSet::set_weights: size mismatch");
  }
  double sum = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("WeightedSampleSet: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("WeightedSampleSet: weights do not sum to one");
  }
  pi_ = std::move(weights);
  normalized_ = true;
}

void WeightedSampleSet::invalidate_weights() { normalized_ = false; }

Vector WeightedSampleSet::weighted_mean() const {
  if (!normalized_) throw std::logic_error("weighted_mean: weights not normalized");
  Vector mean(dim_, 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    simd::axpy(pi_[i], sample(i), mean);
  }
  return mean;
}

}  // namespace pa
