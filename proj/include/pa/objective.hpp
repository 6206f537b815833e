#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>

#include "pa/mog.hpp"

namespace pa {

/// Black-box log-objective with dimension and evaluation-count accounting.
/// The wrapped function must be pure and deterministic; eval_count() is the
/// exact number of calls made through this wrapper.
class ObjectiveSpec {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  ObjectiveSpec(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

  int dim() const { return dim_; }
  std::uint64_t eval_count() const { return eval_count_; }

  double evaluate(std::span<const double> x) {
    ++eval_count_;
    return fn_(x);
  }

  /// Evaluates n samples stored contiguously (n x dim, row-major), in input
  /// order.
  void evaluate_batch(const double* xs, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = fn_({xs + i * dim_, static_cast<std::size_t>(dim_)});
    }
    eval_count_ += n;
  }

 private:
  int dim_;
  Fn fn_;
  std::uint64_t eval_count_ = 0;
};

/// log y = -x.x / 2.
ObjectiveSpec make_quadratic_objective(int dim);

/// log y = log of the mixture density.
ObjectiveSpec make_mog_objective(MixtureOfGaussians mog);

}  // namespace pa
