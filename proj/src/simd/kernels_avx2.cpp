// AVX2 + FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma and must only be *called* after a runtime CPU check
// (see dispatch.cpp); taking the table's address is always safe.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "pa/simd/exp_core.hpp"
#include "pa/simd/kernels.hpp"

namespace pa::simd {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

// 4-lane mirror of exp_core(); same operation sequence, so results are
// bit-identical to the scalar reference per element.
inline __m256d exp4(__m256d x) {
  const __m256d under = _mm256_set1_pd(expc::kUnderflowX);
  const __m256d over = _mm256_set1_pd(expc::kOverflowX);
  const __m256d under_mask = _mm256_cmp_pd(x, under, _CMP_LT_OQ);
  const __m256d over_mask = _mm256_cmp_pd(x, over, _CMP_GT_OQ);
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, under), over);

  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(xc, _mm256_set1_pd(expc::kLog2E)),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fmadd_pd(n, _mm256_set1_pd(-expc::kLn2Hi), xc);
  r = _mm256_fmadd_pd(n, _mm256_set1_pd(-expc::kLn2Lo), r);
  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_fmadd_pd(_mm256_set1_pd(expc::kP0), rr, _mm256_set1_pd(expc::kP1));
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(expc::kP2));
  const __m256d px = _mm256_mul_pd(r, p);
  __m256d q = _mm256_fmadd_pd(_mm256_set1_pd(expc::kQ0), rr, _mm256_set1_pd(expc::kQ1));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(expc::kQ2));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(expc::kQ3));
  const __m256d e = _mm256_add_pd(
      _mm256_set1_pd(1.0),
      _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), px), _mm256_sub_pd(q, px)));

  const __m128i n32 = _mm256_cvtpd_epi32(n);
  const __m256i n64 = _mm256_cvtepi32_epi64(n32);
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  __m256d result = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));

  result = _mm256_blendv_pd(result, _mm256_setzero_pd(), under_mask);
  result = _mm256_blendv_pd(
      result, _mm256_set1_pd(std::numeric_limits<double>::infinity()), over_mask);
  return result;
}

double reduce_max_avx2(const double* v, std::size_t n) {
  __m256d acc = _mm256_set1_pd(kNegInf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(v + i));
  double m = hmax(acc);
  for (; i < n; ++i) {
    if (v[i] > m) m = v[i];
  }
  return m;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double sum = hsum(acc);
  for (; i < n; ++i) sum = std::fma(a[i], b[i], sum);
  return sum;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, r);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

double exp_weights_avx2(const double* v, std::size_t n, double scale, double shift,
                        double* out) {
  const __m256d shiftv = _mm256_set1_pd(shift);
  const __m256d scalev = _mm256_set1_pd(scale);
  const __m256d neg_inf = _mm256_set1_pd(kNegInf);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vv = _mm256_loadu_pd(v + i);
    const __m256d inf_mask = _mm256_cmp_pd(vv, neg_inf, _CMP_EQ_OQ);
    __m256d w = exp4(_mm256_mul_pd(_mm256_sub_pd(vv, shiftv), scalev));
    w = _mm256_blendv_pd(w, _mm256_setzero_pd(), inf_mask);
    _mm256_storeu_pd(out + i, w);
    acc = _mm256_add_pd(acc, w);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double w = v[i] == kNegInf ? 0.0 : exp_core((v[i] - shift) * scale);
    out[i] = w;
    sum += w;
  }
  return sum;
}

ExpSums exp_sums_avx2(const double* v, std::size_t n, double scale, double shift) {
  const __m256d shiftv = _mm256_set1_pd(shift);
  const __m256d scalev = _mm256_set1_pd(scale);
  const __m256d neg_inf = _mm256_set1_pd(kNegInf);
  __m256d acc = _mm256_setzero_pd();
  __m256d acc_sq = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vv = _mm256_loadu_pd(v + i);
    const __m256d inf_mask = _mm256_cmp_pd(vv, neg_inf, _CMP_EQ_OQ);
    __m256d w = exp4(_mm256_mul_pd(_mm256_sub_pd(vv, shiftv), scalev));
    w = _mm256_blendv_pd(w, _mm256_setzero_pd(), inf_mask);
    acc = _mm256_add_pd(acc, w);
    acc_sq = _mm256_fmadd_pd(w, w, acc_sq);
  }
  double sum = hsum(acc);
  double sum_sq = hsum(acc_sq);
  for (; i < n; ++i) {
    const double w = v[i] == kNegInf ? 0.0 : exp_core((v[i] - shift) * scale);
    sum += w;
    sum_sq = std::fma(w, w, sum_sq);
  }
  return {sum, sum_sq};
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{"avx2",     reduce_max_avx2, dot_avx2,
                                 axpy_avx2,  exp_weights_avx2,
                                 exp_sums_avx2};
  return table;
}

}  // namespace pa::simd
