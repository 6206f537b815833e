#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "pa/rng.hpp"
#include "pa/simd/exp_core.hpp"
#include "pa/simd/kernels.hpp"

using pa::RngStream;
namespace simd = pa::simd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> random_values(RngStream& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform();
  return v;
}

const std::vector<std::size_t> kSizes{0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 31, 64, 100, 257};

}  // namespace

TEST_CASE("exp_core matches std::exp to a few ulp") {
  RngStream rng(11);
  for (int i = 0; i < 100000; ++i) {
    const double x = -700.0 + 1400.0 * rng.uniform();
    const double got = simd::exp_core(x);
    const double want = std::exp(x);
    CHECK(std::abs(got - want) <= 1e-14 * want);
  }
  CHECK(simd::exp_core(0.0) == 1.0);
  CHECK(simd::exp_core(-1000.0) == 0.0);
  CHECK(simd::exp_core(-kInf) == 0.0);
  CHECK(simd::exp_core(800.0) == kInf);
}

TEST_CASE("scalar and avx2 exp weights agree bitwise per element") {
  if (!simd::avx2_supported()) return;
  const auto& scalar = simd::scalar_kernels();
  const auto& avx2 = simd::avx2_kernels();
  RngStream rng(22);
  for (const std::size_t n : kSizes) {
    auto v = random_values(rng, n, -60.0, 10.0);
    if (n > 3) {
      v[1] = -kInf;  // dropped samples must map to exactly zero
      v[n / 2] = v[0];
    }
    for (const double scale : {0.0, 0.37, 1.0, 25.0}) {
      const double shift = n == 0 ? 0.0 : scalar.reduce_max(v.data(), n);
      std::vector<double> out_s(n), out_a(n);
      const double sum_s = scalar.exp_weights(v.data(), n, scale, shift, out_s.data());
      const double sum_a = avx2.exp_weights(v.data(), n, scale, shift, out_a.data());
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::memcmp(&out_s[i], &out_a[i], sizeof(double)) == 0);
      }
      CHECK(sum_a == doctest::Approx(sum_s).epsilon(1e-12));
      const auto sums_s = scalar.exp_sums(v.data(), n, scale, shift);
      const auto sums_a = avx2.exp_sums(v.data(), n, scale, shift);
      CHECK(sums_a.sum == doctest::Approx(sums_s.sum).epsilon(1e-12));
      CHECK(sums_a.sum_sq == doctest::Approx(sums_s.sum_sq).epsilon(1e-12));
    }
  }
}

TEST_CASE("scalar and avx2 reductions agree") {
  if (!simd::avx2_supported()) return;
  const auto& scalar = simd::scalar_kernels();
  const auto& avx2 = simd::avx2_kernels();
  RngStream rng(33);
  for (const std::size_t n : kSizes) {
    const auto a = random_values(rng, n, -2.0, 2.0);
    const auto b = random_values(rng, n, -2.0, 2.0);
    if (n > 0) {
      CHECK(scalar.reduce_max(a.data(), n) == avx2.reduce_max(a.data(), n));
    }
    const double dot_s = scalar.dot(a.data(), b.data(), n);
    const double dot_a = avx2.dot(a.data(), b.data(), n);
    CHECK(dot_a == doctest::Approx(dot_s).epsilon(1e-12));
  }
}

TEST_CASE("scalar and avx2 axpy agree bitwise") {
  if (!simd::avx2_supported()) return;
  const auto& scalar = simd::scalar_kernels();
  const auto& avx2 = simd::avx2_kernels();
  RngStream rng(44);
  for (const std::size_t n : kSizes) {
    const auto x = random_values(rng, n, -3.0, 3.0);
    auto y1 = random_values(rng, n, -3.0, 3.0);
    auto y2 = y1;
    scalar.axpy(0.731, x.data(), y1.data(), n);
    avx2.axpy(0.731, x.data(), y2.data(), n);
    if (n > 0) CHECK(std::memcmp(y1.data(), y2.data(), n * sizeof(double)) == 0);
  }
}

TEST_CASE("active backend is well-formed") {
  const auto& active = simd::active_kernels();
  const std::string name = active.name;
  CHECK((name == "scalar" || name == "avx2"));
  CHECK(std::string(simd::active_backend_name()) == name);
  if (!simd::avx2_supported()) CHECK(name == "scalar");
}
