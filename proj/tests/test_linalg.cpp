#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pa/errors.hpp"
#include "pa/linalg.hpp"
#include "pa/rng.hpp"

using namespace pa;

namespace {

Matrix random_spd(RngStream& rng, int n, double diag_boost) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  Matrix spd(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += a(i, k) * a(j, k);
      spd(i, j) = acc;
    }
    spd(i, i) += diag_boost;
  }
  return spd;
}

}  // namespace

TEST_CASE("cholesky reproduces a known factorization") {
  Matrix a(2, 2);
  a(0, 0) = 4.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 5.0;
  const CholeskyFactor f = cholesky_with_jitter(a);
  CHECK(f.jitter == 0.0);
  CHECK(f.lower(0, 0) == doctest::Approx(2.0));
  CHECK(f.lower(1, 0) == doctest::Approx(1.0));
  CHECK(f.lower(1, 1) == doctest::Approx(2.0));
  CHECK(f.log_det() == doctest::Approx(std::log(16.0)));
}

TEST_CASE("cholesky round-trips random SPD matrices") {
  RngStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 8);
    const Matrix a = random_spd(rng, n, 0.5);
    const CholeskyFactor f = cholesky_with_jitter(a);
    CHECK(f.jitter == 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += f.lower(i, k) * f.lower(j, k);
        CHECK(acc == doctest::Approx(a(i, j)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("jitter policy escalates and then fails") {
  // Rank-one matrix: needs jitter, succeeds well before the cap.
  Matrix rank1(2, 2);
  rank1(0, 0) = 1.0;
  rank1(0, 1) = 1.0;
  rank1(1, 0) = 1.0;
  rank1(1, 1) = 1.0;
  const CholeskyFactor f = cholesky_with_jitter(rank1);
  CHECK(f.attempts >= 1);
  CHECK(f.jitter > 0.0);
  CHECK(f.jitter <= 1e-6);

  // Zero trace leaves nothing to jitter with.
  Matrix zero(3, 3);
  CHECK_THROWS_AS(cholesky_with_jitter(zero), SingularCovariance);

  Matrix indefinite(2, 2);
  indefinite(0, 0) = 1.0;
  indefinite(1, 1) = -5.0;
  CHECK_THROWS_AS(cholesky_with_jitter(indefinite), SingularCovariance);
}

TEST_CASE("triangular solves, inverse and mahalanobis") {
  RngStream rng(6);
  const int n = 5;
  const Matrix a = random_spd(rng, n, 1.0);
  const CholeskyFactor f = cholesky_with_jitter(a);

  Vector b(n);
  for (auto& v : b) v = rng.normal();
  const Vector y = forward_solve(f.lower, b);
  const Vector x = back_solve_transposed(f.lower, y);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += a(i, j) * x[j];
    CHECK(acc == doctest::Approx(b[i]).epsilon(1e-9));
  }

  const Matrix inv = inverse_spd(a);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += a(i, k) * inv(k, j);
      CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
    }
  }

  Vector diff(n);
  for (auto& v : diff) v = rng.normal();
  double want = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) want += diff[i] * inv(i, j) * diff[j];
  }
  CHECK(mahalanobis_sq(f, diff) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("symmetry check uses a relative tolerance") {
  Matrix a = Matrix::scaled_identity(3, 1000.0);
  a(0, 1) = 5.0;
  a(1, 0) = 5.0 + 1e-8;
  CHECK(is_symmetric(a));  // 1e-8 against scale 1000 is within 1e-10 relative
  a(1, 0) = 5.0 + 1e-6;
  CHECK(!is_symmetric(a));
  CHECK(is_symmetric(Matrix(4, 4)));
}
