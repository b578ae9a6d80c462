#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polyiter/game.hpp"

namespace polyiter {

/// Dense row-major matrix. Sizes here are "desk scale" (tens of states), so
/// no attempt is made at blocking or sparsity.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  /// Maximum absolute row sum.
  double norm_inf() const;

  Vector operator*(std::span<const double> x) const;
  Matrix operator*(const Matrix& rhs) const;
  Matrix& operator*=(double s);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// LU factorization with partial pivoting. Construction throws
/// Error{SingularSystem} when a pivot falls below `pivot_tol * max(1, ||A||_inf)`.
class LuFactorization {
 public:
  static constexpr double kDefaultPivotTolerance = 1e-12;

  explicit LuFactorization(Matrix a, double pivot_tol = kDefaultPivotTolerance);

  /// Solves A x = b, followed by one step of iterative refinement against
  /// the unfactored matrix.
  Vector solve(std::span<const double> b) const;

 private:
  Vector substitute(std::span<const double> b) const;

  Matrix original_;
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

double norm_inf(std::span<const double> v);
/// max_i |a_i - b_i|
double dist_inf(std::span<const double> a, std::span<const double> b);

/// Solves v = M v + r, i.e. (I - M) v = r.
Vector affine_fixed_point(const Matrix& m, std::span<const double> r);

struct EigenPair {
  double eta = 0.0;
  Vector bias;
  std::size_t c = 0;
};

/// Solves eta 1 + v = M v + r with v_c = 0 as one (n+1) x (n+1) system.
/// Throws Error{MultichainDetected} when that system is singular.
EigenPair additive_eigenpair(const Matrix& m, std::span<const double> r, std::size_t c);

/// rho(M) for entrywise nonnegative M, from ||M^(2^j)||_inf^(1/2^j) with
/// renormalized repeated squaring.
double spectral_radius(const Matrix& m);

/// Matrix and reward vector selected by a policy pair.
Matrix pair_matrix(const GameInstance& game, const MinPolicy& sigma, const MaxPolicy& delta);
Vector pair_rewards(const GameInstance& game, const MinPolicy& sigma, const MaxPolicy& delta);

}  // namespace polyiter
