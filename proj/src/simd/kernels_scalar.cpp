#include <cmath>
#include <limits>

#include "pa/simd/exp_core.hpp"
#include "pa/simd/kernels.hpp"

namespace pa::simd {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double reduce_max_scalar(const double* v, std::size_t n) {
  double m = kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] > m) m = v[i];
  }
  return m;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::fma(a[i], b[i], acc);
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

double exp_weights_scalar(const double* v, std::size_t n, double scale, double shift,
                          double* out) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = v[i] == kNegInf ? 0.0 : exp_core((v[i] - shift) * scale);
    out[i] = w;
    sum += w;
  }
  return sum;
}

ExpSums exp_sums_scalar(const double* v, std::size_t n, double scale, double shift) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = v[i] == kNegInf ? 0.0 : exp_core((v[i] - shift) * scale);
    sum += w;
    sum_sq = std::fma(w, w, sum_sq);
  }
  return {sum, sum_sq};
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar",          reduce_max_scalar, dot_scalar,
                                 axpy_scalar,       exp_weights_scalar,
                                 exp_sums_scalar};
  return table;
}

}  // namespace pa::simd
