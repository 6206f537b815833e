#pragma once

#include <span>
#include <vector>

#include "pa/errors.hpp"

namespace pa {

using Vector = std::vector<double>;

/// Dense row-major matrix, sized for the small dimensions this library
/// works in (state dimension up to a few dozen).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix identity(int n);
  static Matrix scaled_identity(int n, double value);
  static Matrix diagonal(std::span<const double> diag);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  std::span<const double> row_span(int r) const { return {row(r), static_cast<std::size_t>(cols_)}; }

  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Max |a_ij - a_ji| <= rel_tol * max |a_ij| (always true for an all-zero matrix).
bool is_symmetric(const Matrix& a, double rel_tol = 1e-10);

struct CholeskyFactor {
  Matrix lower;       // L with A + jitter*I = L L^T
  double jitter = 0;  // diagonal amount added to make the factorization succeed
  int attempts = 0;   // failed attempts before success

  /// log|A + jitter*I| from the factor diagonal.
  double log_det() const;
};

/// Plain lower Cholesky; returns false when a pivot is not strictly positive
/// and finite.
bool cholesky(const Matrix& a, Matrix& lower);

/// Cholesky with the escalating jitter policy: on failure, retries with
/// eps * trace(a)/d added to the diagonal for eps = 1e-10, 1e-9, ..., 1e-6,
/// then throws SingularCovariance.
CholeskyFactor cholesky_with_jitter(const Matrix& a);

/// Solves L y = b for lower-triangular L.
Vector forward_solve(const Matrix& lower, std::span<const double> b);

/// Solves L^T x = b for lower-triangular L.
Vector back_solve_transposed(const Matrix& lower, std::span<const double> b);

/// Inverse of an SPD matrix via its (jittered) Cholesky factor.
Matrix inverse_spd(const Matrix& a);

/// diff^T (L L^T)^-1 diff given the factor of the covariance.
double mahalanobis_sq(const CholeskyFactor& factor, std::span<const double> diff);

}  // namespace pa
