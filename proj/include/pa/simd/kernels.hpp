#pragma once

#include <cstddef>
#include <span>

namespace pa::simd {

struct ExpSums {
  double sum;
  double sum_sq;
};

// The hot numeric loops of the library, behind runtime dispatch. The
// exp-weight kernels compute w_i = exp((v[i] - shift) * scale) with
// v[i] == -inf mapping to w_i = 0 (so zero-likelihood samples drop out
// even at scale = 0).
struct KernelTable {
  const char* name;
  double (*reduce_max)(const double* v, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*exp_weights)(const double* v, std::size_t n, double scale, double shift,
                        double* out);
  ExpSums (*exp_sums)(const double* v, std::size_t n, double scale, double shift);
};

const KernelTable& scalar_kernels();

/// True when the AVX2 translation unit was compiled into this build.
bool avx2_compiled();
/// True when the AVX2 kernels are both compiled in and usable on this CPU.
bool avx2_supported();
/// Valid to call only when avx2_supported().
const KernelTable& avx2_kernels();

/// Backend chosen once per process: PA_SIMD=scalar|avx2|auto (default auto).
const KernelTable& active_kernels();
const char* active_backend_name();

inline double reduce_max(std::span<const double> v) {
  return active_kernels().reduce_max(v.data(), v.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

/// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(a, x.data(), y.data(), x.size());
}

/// out_i = exp((v_i - shift) * scale); returns sum of out.
inline double exp_weights(std::span<const double> v, double scale, double shift,
                          std::span<double> out) {
  return active_kernels().exp_weights(v.data(), v.size(), scale, shift, out.data());
}

/// Sum and sum-of-squares of exp((v_i - shift) * scale), without storing.
inline ExpSums exp_sums(std::span<const double> v, double scale, double shift) {
  return active_kernels().exp_sums(v.data(), v.size(), scale, shift);
}

}  // namespace pa::simd
