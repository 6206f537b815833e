#include "pa/linalg.hpp"

#include <cmath>
#include <cstdlib>

#include "pa/simd/kernels.hpp"

namespace pa {

Matrix Matrix::identity(int n) { return scaled_identity(n, 1.0); }

Matrix Matrix::scaled_identity(int n, double value) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = value;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(static_cast<int>(diag.size()), static_cast<int>(diag.size()));
  for (int i = 0; i < m.rows(); ++i) m(i, i) = diag[i];
  return m;
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  const double tol = rel_tol * scale;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    }
  }
  return true;
}

double CholeskyFactor::log_det() const {
  double acc = 0.0;
  for (int i = 0; i < lower.rows(); ++i) acc += std::log(lower(i, i));
  return 2.0 * acc;
}

bool cholesky(const Matrix& a, Matrix& lower) {
  const int n = a.rows();
  lower = Matrix(n, n);
  const auto& k = simd::active_kernels();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double partial = k.dot(lower.row(i), lower.row(j), static_cast<std::size_t>(j));
      const double v = a(i, j) - partial;
      if (i == j) {
        if (!(v > 0.0) || !std::isfinite(v)) return false;
        lower(i, i) = std::sqrt(v);
      } else {
        lower(i, j) = v / lower(j, j);
      }
    }
  }
  return true;
}

CholeskyFactor cholesky_with_jitter(const Matrix& a) {
  CholeskyFactor factor;
  if (cholesky(a, factor.lower)) return factor;

  const int n = a.rows();
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += a(i, i);
  const double base = trace / n;

  double eps = 1e-10;
  for (int attempt = 1; attempt <= 5; ++attempt, eps *= 10.0) {
    const double jitter = eps * base;
    Matrix jittered = a;
    for (int i = 0; i < n; ++i) jittered(i, i) += jitter;
    if (cholesky(jittered, factor.lower)) {
      factor.jitter = jitter;
      factor.attempts = attempt;
      return factor;
    }
  }
  throw SingularCovariance("covariance not factorizable after 5 jitter attempts");
}

Vector forward_solve(const Matrix& lower, std::span<const double> b) {
  const int n = lower.rows();
  Vector y(b.begin(), b.end());
  const auto& k = simd::active_kernels();
  for (int i = 0; i < n; ++i) {
    const double partial = k.dot(lower.row(i), y.data(), static_cast<std::size_t>(i));
    y[i] = (y[i] - partial) / lower(i, i);
  }
  return y;
}

Vector back_solve_transposed(const Matrix& lower, std::span<const double> b) {
  const int n = lower.rows();
  Vector x(b.begin(), b.end());
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    for (int j = i + 1; j < n; ++j) acc -= lower(j, i) * x[j];
    x[i] = acc / lower(i, i);
  }
  return x;
}

Matrix inverse_spd(const Matrix& a) {
  const CholeskyFactor factor = cholesky_with_jitter(a);
  const int n = a.rows();
  Matrix inv(n, n);
  Vector unit(n, 0.0);
  for (int c = 0; c < n; ++c) {
    unit[c] = 1.0;
    const Vector y = forward_solve(factor.lower, unit);
    const Vector x = back_solve_transposed(factor.lower, y);
    for (int r = 0; r < n; ++r) inv(r, c) = x[r];
    unit[c] = 0.0;
  }
  // Symmetrize away the last-ulp asymmetry from the two triangular solves.
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      const double v = 0.5 * (inv(r, c) + inv(c, r));
      inv(r, c) = v;
      inv(c, r) = v;
    }
  }
  return inv;
}

double mahalanobis_sq(const CholeskyFactor& factor, std::span<const double> diff) {
  const Vector y = forward_solve(factor.lower, diff);
  return simd::dot(y, y);
}

}  // namespace pa
