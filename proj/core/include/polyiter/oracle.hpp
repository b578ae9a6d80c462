#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "polyiter/game.hpp"
#include "polyiter/linalg.hpp"

// Independent baselines. Nothing here calls into the policy-improvement code
// in shapley/policy_iteration; only the dense linear algebra is shared.
namespace polyiter::oracle {

struct DiscountedAnswer {
  Vector value;
  MinPolicy min_policy;
  MaxPolicy max_policy;
};

struct MeanAnswer {
  EigenPair eigen;
  MinPolicy min_policy;
  MaxPolicy max_policy;
};

/// v*_i = min_sigma max_delta (I - M^{(sigma delta)})^{-1} r^{(sigma delta)}, by
/// full enumeration of policy pairs. Throws Error{CombinatorialOverflow}.
DiscountedAnswer brute_force_discounted(const GameInstance& game,
                                        std::uint64_t cap = kDefaultEnumerationCap);

/// eta* = min_sigma max_delta eta^{(sigma delta)}; bias taken at the
/// selected pair.
MeanAnswer brute_force_mean(const GameInstance& game, std::size_t c,
                            std::uint64_t cap = kDefaultEnumerationCap);

/// T applications of the Shapley operator, evaluated directly from the
/// kernel rows.
Vector value_iteration(const GameInstance& game, std::span<const double> v0, std::size_t steps);

/// (I - M_(c)) phi = 1.
Vector brute_force_return_time(const Matrix& m, std::size_t c);

/// Coefficients of det(x I - M), highest degree first (leading 1).
std::vector<double> characteristic_polynomial(const Matrix& m);
/// All complex roots of a monic-normalizable polynomial (highest degree first).
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);
/// max |root| of the characteristic polynomial; intended for n <= 4.
double spectral_radius_charpoly(const Matrix& m);
/// max |eigenvalue| from a dense eigen-solve (Eigen); intended for n <= 8.
double spectral_radius_dense(const Matrix& m);

}  // namespace polyiter::oracle
