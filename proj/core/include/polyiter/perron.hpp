#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "polyiter/game.hpp"
#include "polyiter/linalg.hpp"

namespace polyiter {

/// A rectangular family of nonnegative matrices: member matrices pick one
/// row per state independently. The induced map is
///   fbar(v)_i = max_{row in rows[i]} row . v
struct MatrixFamily {
  std::vector<std::vector<Vector>> rows;

  std::size_t dim() const noexcept { return rows.size(); }
  /// Number of member matrices, saturating at UINT64_MAX.
  std::uint64_t member_count() const;
  Vector apply(std::span<const double> v) const;
};

/// Every kernel row of the game, deduplicated per state.
MatrixFamily family_from_instance(const GameInstance& game);
/// Kernel rows reachable when the min player is fixed to sigma.
MatrixFamily family_from_fixed_min(const GameInstance& game, const MinPolicy& sigma);

/// Removes exact duplicate rows per state, keeping first occurrences.
void deduplicate(MatrixFamily& family);

enum class RadiusMode { Enumerate, BinarySearch };

struct PerronOptions {
  std::uint64_t member_cap = 1'000'000;
  /// Overall iteration cap for one "omega < lambda" decision.
  std::uint64_t iteration_cap = 1'000'000;
  /// Monotone value iterations tried before switching to row-policy iteration.
  std::uint64_t value_iteration_budget = 2'000;
  double divergence_threshold = 1e12;
  double bisection_width = 1e-8;
};

/// omega = max over member matrices of rho(M).
double hull_spectral_radius(const MatrixFamily& family, RadiusMode mode,
                            const PerronOptions& opts = {});

/// Certified answer to "is omega < lambda?". When true, `phi` solves
/// phi = fbar(phi) / lambda + 1, hence fbar(phi) = lambda (phi - 1) < lambda phi.
struct DominanceVerdict {
  bool dominated = false;
  Vector phi;
};
DominanceVerdict test_dominance(const MatrixFamily& family, double lambda,
                                const PerronOptions& opts = {});

/// phi >= 1 with fbar(phi) <= lambda phi. Throws Error{RadiusNotDominated}
/// when lambda <= omega.
Vector collatz_wielandt_vector(const MatrixFamily& family, double lambda,
                               const PerronOptions& opts = {});

struct ReturnTimeResult {
  Vector phi;          // worst-case mean first passage time to c, phi_c the return time
  double K = 1.0;      // max_i phi_i
  double lambda = 0.0; // (K - 1) / K
  std::size_t c = 0;
};

/// Zeroes column c of every row.
MatrixFamily stopped_family(const MatrixFamily& family, std::size_t c);

/// Solves phi = 1 + fbar_(c)(phi) over the stopped family by policy iteration
/// on row choices. Throws Error{NoRenewalState} when some member matrix has a
/// final class avoiding c.
ReturnTimeResult mean_return_times(const MatrixFamily& family, std::size_t c,
                                   const PerronOptions& opts = {});

}  // namespace polyiter
