#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace pa::simd {

// Range-reduced rational approximation of exp(x), Cephes-style. The scalar
// path below and the AVX2 path perform the identical operation sequence
// (FMA contractions written out explicitly), so both backends produce
// bit-identical results per element.
namespace expc {
inline constexpr double kLog2E = 1.4426950408889634073599;
inline constexpr double kLn2Hi = 6.93145751953125e-1;
inline constexpr double kLn2Lo = 1.42860682030941723212e-6;
inline constexpr double kP0 = 1.26177193074810590878e-4;
inline constexpr double kP1 = 3.02994407707441961300e-2;
inline constexpr double kP2 = 9.99999999999999999910e-1;
inline constexpr double kQ0 = 3.00198505138664455042e-6;
inline constexpr double kQ1 = 2.52448340349684104192e-3;
inline constexpr double kQ2 = 2.27265548208155028766e-1;
inline constexpr double kQ3 = 2.00000000000000000005e0;
// Below kUnderflowX the result is flushed to zero (keeps 2^n construction
// inside the normal range); above kOverflowX it is +inf.
inline constexpr double kUnderflowX = -708.25;
inline constexpr double kOverflowX = 709.0;
}  // namespace expc

/// exp(x) accurate to a few ulp over [kUnderflowX, kOverflowX]; flushes to
/// 0 / +inf outside that range. Never returns NaN for non-NaN input.
inline double exp_core(double x) noexcept {
  if (x < expc::kUnderflowX) return 0.0;
  if (x > expc::kOverflowX) return std::numeric_limits<double>::infinity();
  const double n = std::nearbyint(x * expc::kLog2E);
  double r = std::fma(n, -expc::kLn2Hi, x);
  r = std::fma(n, -expc::kLn2Lo, r);
  const double rr = r * r;
  double p = std::fma(expc::kP0, rr, expc::kP1);
  p = std::fma(p, rr, expc::kP2);
  const double px = r * p;
  double q = std::fma(expc::kQ0, rr, expc::kQ1);
  q = std::fma(q, rr, expc::kQ2);
  q = std::fma(q, rr, expc::kQ3);
  const double e = 1.0 + 2.0 * px / (q - px);
  const auto biased = static_cast<std::uint64_t>(static_cast<std::int64_t>(n) + 1023);
  const double pow2n = std::bit_cast<double>(biased << 52);
  return e * pow2n;
}

}  // namespace pa::simd
