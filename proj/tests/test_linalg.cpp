#include <doctest.h>

#include <cmath>

#include "polyiter/error.hpp"
#include "polyiter/linalg.hpp"
#include "polyiter/oracle.hpp"
#include "support.hpp"

using namespace polyiter;
using namespace polyiter::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

Vector residual(const Matrix& m, const Vector& v, const Vector& r) {
  Vector mv = m * v;
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - mv[i] - r[i];
  return out;
}

}  // namespace

TEST_CASE("affine fixed point examples") {
  CHECK(affine_fixed_point(Matrix::from_rows({{0.5}}), Vector{1.0})[0] == doctest::Approx(2.0).epsilon(1e-15));
  Vector r{3.0, -1.5, 7.0};
  CHECK(affine_fixed_point(Matrix(3, 3), r) == r);
  auto v = affine_fixed_point(Matrix::from_rows({{0.0, 0.5}, {0.5, 0.0}}), Vector{1.0, 1.0});
  CHECK(all_close(v, Vector{2.0, 2.0}, 1e-14));
}

TEST_CASE("affine fixed point agrees with Cramer's rule") {
  Xoshiro256 rng(7);
  for (int k = 0; k < 200; ++k) {
    Matrix m = random_nonnegative(rng, 2, 0.49);
    Vector r{rng.uniform() * 10 - 5, rng.uniform() * 10 - 5};
    auto [x, y] = cramer2(1 - m(0, 0), -m(0, 1), -m(1, 0), 1 - m(1, 1), r[0], r[1]);
    Vector v = affine_fixed_point(m, r);
    CHECK(v[0] == doctest::Approx(x).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(y).epsilon(1e-12));
  }
}

TEST_CASE("affine fixed point residual") {
  Xoshiro256 rng(11);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + k % 8;
    Matrix m = random_nonnegative(rng, n);
    m *= 0.95 / std::max(m.norm_inf(), 1e-3);
    Vector r(n);
    for (double& x : r) x = rng.uniform() * 200 - 100;
    Vector v = affine_fixed_point(m, r);
    CHECK(norm_inf(residual(m, v, r)) <= 1e-10 * (1 + norm_inf(r)));
  }
}

TEST_CASE("affine fixed point rejects a singular system") {
  CHECK(code_of([] { affine_fixed_point(Matrix::identity(2), Vector{1.0, 1.0}); }) ==
        ErrorCode::SingularSystem);
  CHECK(code_of([] { affine_fixed_point(Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}), Vector{1.0, 0.0}); }) ==
        ErrorCode::SingularSystem);
}

TEST_CASE("additive eigenpair examples") {
  auto p = additive_eigenpair(Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}), Vector{0.0, 2.0}, 0);
  CHECK(p.eta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.bias[0] == 0.0);
  CHECK(p.bias[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.c == 0);

  CHECK(code_of([] { additive_eigenpair(Matrix::identity(2), Vector{1.0, 2.0}, 0); }) ==
        ErrorCode::MultichainDetected);

  Xoshiro256 rng(3);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 1 + k % 6;
    Matrix m = random_markov(rng, n);
    for (std::size_t i = 0; i < n; ++i) {
      // Guarantee a single recurrent class through state 0.
      for (double& x : m.row(i)) x *= 0.7;
      m(i, 0) += 0.3;
    }
    const double rho = rng.uniform() * 4 - 2;
    auto q = additive_eigenpair(m, Vector(n, rho), 0);
    CHECK(q.eta == doctest::Approx(rho).epsilon(1e-12));
    CHECK(norm_inf(q.bias) <= 1e-12);
  }
}

TEST_CASE("additive eigenpair is invariant under the normalization state") {
  Xoshiro256 rng(5);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + k % 5;
    Matrix m = random_markov(rng, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& x : m.row(i)) x *= 0.8;
      m(i, 0) += 0.2;
    }
    Vector r(n);
    for (double& x : r) x = rng.uniform() * 10 - 5;
    auto p = additive_eigenpair(m, r, 0);
    const std::size_t c = rng.uniform_int(1, n - 1);
    auto q = additive_eigenpair(m, r, c);
    CHECK(q.bias[c] == 0.0);
    CHECK(p.eta == doctest::Approx(q.eta).epsilon(1e-10));
    const double shift = q.bias[0] - p.bias[0];
    for (std::size_t i = 0; i < n; ++i) CHECK(q.bias[i] - p.bias[i] == doctest::Approx(shift).epsilon(1e-9));
    // eta + v = M v + r
    Vector mv = m * q.bias;
    for (std::size_t i = 0; i < n; ++i) CHECK(q.eta + q.bias[i] == doctest::Approx(mv[i] + r[i]).epsilon(1e-10));
  }
}

TEST_CASE("spectral radius examples") {
  CHECK(spectral_radius(Matrix::from_rows({{0.5, 0.3}, {0.2, 0.4}})) == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(spectral_radius(Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_radius(Matrix(3, 3)) == 0.0);
  CHECK(code_of([] { spectral_radius(Matrix::from_rows({{0.5, -0.1}, {0.0, 0.5}})); }) ==
        ErrorCode::NonNegativeViolation);
}

TEST_CASE("spectral radius of 2x2 matrices matches the quadratic formula") {
  Xoshiro256 rng(13);
  for (int k = 0; k < 200; ++k) {
    Matrix m = random_nonnegative(rng, 2);
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double rho = 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4 * det)));
    CHECK(std::abs(spectral_radius(m) - rho) <= 1e-6 * std::max(1.0, rho));
  }
}

TEST_CASE("spectral radius matches the polynomial and dense oracles") {
  Xoshiro256 rng(17);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + k % 8;
    Matrix m = random_nonnegative(rng, n);
    const double est = spectral_radius(m);
    const double dense = oracle::spectral_radius_dense(m);
    CHECK(std::abs(est - dense) <= 1e-6 * std::max(1.0, dense));
    if (n <= 4) {
      const double poly = oracle::spectral_radius_charpoly(m);
      CHECK(std::abs(est - poly) <= 1e-6 * std::max(1.0, poly));
    }
  }
}

TEST_CASE("spectral radius is positively homogeneous") {
  Xoshiro256 rng(19);
  for (int k = 0; k < 100; ++k) {
    Matrix m = random_nonnegative(rng, 1 + k % 6);
    const double alpha = 0.01 + 10 * rng.uniform();
    Matrix scaled = m;
    scaled *= alpha;
    const double a = spectral_radius(scaled);
    const double b = alpha * spectral_radius(m);
    CHECK(std::abs(a - b) <= 1e-6 * std::max(1.0, b));
  }
}

TEST_CASE("pair matrix and rewards pick the chosen rows") {
  auto g = one_state_game();
  MinPolicy sigma{{1}};
  MaxPolicy delta = first_max_policy(g);
  CHECK(pair_matrix(g, sigma, delta) == Matrix::from_rows({{0.9}}));
  CHECK(pair_rewards(g, sigma, delta) == Vector{1.0});
}
