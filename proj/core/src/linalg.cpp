#include "polyiter/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyiter/error.hpp"

namespace polyiter {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::InvalidArgument, "ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (double x : row(i)) s += std::abs(x);
    best = std::max(best, s);
  }
  return best;
}

Vector Matrix::operator*(std::span<const double> x) const {
  if (x.size() != cols_) throw Error(ErrorCode::InvalidArgument, "matrix-vector size mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(ErrorCode::InvalidArgument, "matrix-matrix size mismatch");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

// ---------------------------------------------------------------------------

LuFactorization::LuFactorization(Matrix a, double pivot_tol) : original_(a), lu_(std::move(a)) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw Error(ErrorCode::InvalidArgument, "LU needs a square matrix");
  const double threshold = pivot_tol * std::max(1.0, original_.norm_inf());
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    }
    if (!(std::abs(lu_(p, k)) >= threshold)) {
      std::ostringstream os;
      os << "pivot " << lu_(p, k) << " below " << threshold << " at column " << k + 1;
      throw Error(ErrorCode::SingularSystem, os.str());
    }
    if (p != k) {
      std::swap_ranges(lu_.row(p).begin(), lu_.row(p).end(), lu_.row(k).begin());
      std::swap(perm_[p], perm_[k]);
    }
    const double pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = lu_(i, k) / pivot;
      lu_(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
    }
  }
}

Vector LuFactorization::substitute(std::span<const double> b) const {
  const std::size_t n = lu_.rows();
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = b[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc / lu_(i, i);
  }
  return x;
}

Vector LuFactorization::solve(std::span<const double> b) const {
  if (b.size() != lu_.rows()) throw Error(ErrorCode::InvalidArgument, "rhs size mismatch");
  Vector x = substitute(b);
  Vector residual(b.begin(), b.end());
  const Vector ax = original_ * x;
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= ax[i];
  const Vector dx = substitute(residual);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  return x;
}

// ---------------------------------------------------------------------------

double norm_inf(std::span<const double> v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

double dist_inf(std::span<const double> a, std::span<const double> b) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

Vector affine_fixed_point(const Matrix& m, std::span<const double> r) {
  const std::size_t n = m.rows();
  if (m.cols() != n || r.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "affine_fixed_point size mismatch");
  }
  Matrix a = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) -= m(i, j);
  }
  return LuFactorization(std::move(a)).solve(r);
}

EigenPair additive_eigenpair(const Matrix& m, std::span<const double> r, std::size_t c) {
  const std::size_t n = m.rows();
  if (m.cols() != n || r.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "additive_eigenpair size mismatch");
  }
  if (c >= n) throw Error(ErrorCode::IndexOutOfRange, "normalization state");

  // Unknowns (v_1..v_n, eta): (I - M) v + eta 1 = r and v_c = 0.
  Matrix a(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - m(i, j);
    a(i, n) = 1.0;
  }
  a(n, c) = 1.0;
  Vector rhs(r.begin(), r.end());
  rhs.push_back(0.0);

  Vector x;
  try {
    x = LuFactorization(std::move(a)).solve(rhs);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularSystem) throw;
    throw Error(ErrorCode::MultichainDetected,
                "eigen system singular (several final classes?): " + std::string(e.what()));
  }
  EigenPair out;
  out.eta = x[n];
  out.bias.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  out.bias[c] = 0.0;
  out.c = c;
  return out;
}

double spectral_radius(const Matrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw Error(ErrorCode::InvalidArgument, "spectral_radius needs a square matrix");
  for (std::size_t i = 0; i < n; ++i) {
    for (double x : m.row(i)) {
      if (x < 0.0) throw Error(ErrorCode::NonNegativeViolation, "negative matrix entry");
    }
  }
  const double norm0 = m.norm_inf();
  if (n == 0 || norm0 == 0.0) return 0.0;

  // Invariant: power = M^(2^j) / ||M^(2^j)||, log_norm = log ||M^(2^j)||.
  Matrix power = m;
  power *= 1.0 / norm0;
  double log_norm = std::log(norm0);
  double prev = norm0;
  double scale = 1.0;
  constexpr int kMaxSquarings = 40;
  for (int j = 1; j <= kMaxSquarings; ++j) {
    power = power * power;
    const double s = power.norm_inf();
    if (s == 0.0) return 0.0;  // nilpotent
    power *= 1.0 / s;
    log_norm = 2.0 * log_norm + std::log(s);
    scale *= 0.5;
    const double est = std::exp(log_norm * scale);
    if (j >= 3 && std::abs(est - prev) < 1e-9 * prev) return est;
    prev = est;
  }
  return prev;
}

Matrix pair_matrix(const GameInstance& game, const MinPolicy& sigma, const MaxPolicy& delta) {
  const std::size_t n = game.num_states();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = sigma.choice.at(i);
    const auto row = game.row(i, a, delta.choice.at(i).at(a));
    std::copy(row.begin(), row.end(), m.row(i).begin());
  }
  return m;
}

Vector pair_rewards(const GameInstance& game, const MinPolicy& sigma, const MaxPolicy& delta) {
  Vector r(game.num_states());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const std::size_t a = sigma.choice.at(i);
    r[i] = game.reward(i, a, delta.choice.at(i).at(a));
  }
  return r;
}

}  // namespace polyiter
