#pragma once

#include <cstddef>

#include "polyiter/game.hpp"

namespace polyiter {

struct ImprovementConfig {
  /// Slack under which the current action is considered still optimal.
  double tie_tolerance = 1e-9;
  /// Keep the current action whenever it is within tolerance of the optimum.
  bool conservative = true;
  /// Scale the slack by max(1, |best|) per coordinate.
  bool relative = false;
};

struct ArgBest {
  double value;
  std::size_t index;
};

/// F[v](i,a,b) = sum_y M_{iy}^{ab} v_y + r_i^{ab}.
double eval_triple(const GameInstance& game, std::span<const double> v, std::size_t i,
                   std::size_t a, std::size_t b);

/// F[v](i,a) = max_b F[v](i,a,b), with the smallest maximizing index.
ArgBest eval_max(const GameInstance& game, std::span<const double> v, std::size_t i,
                 std::size_t a);

/// F[v](i) = min_a F[v](i,a), with the smallest minimizing index.
ArgBest eval_min(const GameInstance& game, std::span<const double> v, std::size_t i);

/// The Shapley operator f(v).
Vector eval_operator(const GameInstance& game, std::span<const double> v);

/// f^{(sigma)}(v): the max player still optimizes.
Vector eval_policy_min(const GameInstance& game, const MinPolicy& sigma, std::span<const double> v);

/// f^{(sigma delta)}(v) = M^{(sigma delta)} v + r^{(sigma delta)}.
Vector eval_policy_pair(const GameInstance& game, const MinPolicy& sigma, const MaxPolicy& delta,
                        std::span<const double> v);

MinPolicy improve_min(const GameInstance& game, std::span<const double> v, const MinPolicy& current,
                      const ImprovementConfig& cfg = {});

/// Only the entries delta(i, sigma_i) are revisited; the others do not enter
/// f^{(sigma delta)} and are returned unchanged.
MaxPolicy improve_max(const GameInstance& game, const MinPolicy& sigma, std::span<const double> v,
                      const MaxPolicy& current, const ImprovementConfig& cfg = {});

}  // namespace polyiter
