#pragma once

#include <cstddef>
#include <optional>
#include <variant>

#include "polyiter/game.hpp"
#include "polyiter/linalg.hpp"

namespace polyiter {

enum class TransformKind { Scaling, MeanReduction };

struct TransformRecord {
  TransformKind kind = TransformKind::Scaling;
  Vector phi;
  std::optional<std::size_t> c;
  double lambda_certified = 0.0;
};

/// M'_{iy} = M_{iy} phi_y / phi_i, r'_i = r_i / phi_i, so that the new
/// Shapley operator is w -> phi^{-1} f(phi w).
GameInstance scale_instance(const GameInstance& game, std::span<const double> phi);

/// Materializes w -> phi^{-1} (eta (phi - 1) + f(v)) with eta = w_c and
/// v = phi (w - w_c). The result is a discounted instance whose rows sum to at
/// most (K - 1) / K when phi comes from mean_return_times.
GameInstance mean_to_discounted(const GameInstance& game, std::size_t c, std::span<const double> phi);

/// Column c replaced by (phi - 1 - M_(c) phi) / phi_c, row by row.
Matrix stop_and_compensate(const Matrix& m, std::size_t c, std::span<const double> phi);

struct ContractionCheck {
  bool pass = true;
  double worst_sum = 0.0;
  std::size_t state = 0;
  std::size_t min_action = 0;
  std::size_t max_action = 0;
};

/// Every kernel row sum must be <= lambda + 1e-9.
ContractionCheck verify_contraction(const GameInstance& game, double lambda);

/// Largest kernel row sum over all triples (0 for an empty kernel).
double max_row_sum(const GameInstance& game);

using LiftedSolution = std::variant<Vector, EigenPair>;

/// Scaling: v = phi w. MeanReduction: eta = w_c, v = phi (w - w_c).
LiftedSolution lift_solution(const TransformRecord& record, std::span<const double> w);

}  // namespace polyiter
