#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyiter/game.hpp"
#include "polyiter/linalg.hpp"
#include "polyiter/perron.hpp"
#include "polyiter/shapley.hpp"

namespace polyiter {

struct InnerStep {
  MaxPolicy delta;
  Vector value;               // v^{k,j} (bias in the mean case)
  std::optional<double> eta;  // eta^{k,j}, mean case only
};

struct OuterStep {
  MinPolicy sigma;
  Vector value;               // v^k (bias in the mean case)
  std::optional<double> eta;  // eta^k, mean case only
  double residual_norm = 0.0; // ||f(v^k) - v^k||_inf, or ||f(v^k) - eta^k - v^k||_inf
  std::vector<InnerStep> inner;
};

enum class StopReason { PolicyRepeatedStop, BoundExceeded, Error };

struct IterationTrace {
  std::vector<OuterStep> outer;
  StopReason stopped_reason = StopReason::PolicyRepeatedStop;

  /// Number of policies evaluated by the outer loop.
  std::size_t evaluations() const noexcept { return outer.size(); }
  /// Index k at which the outer loop stopped; this is what the iteration
  /// bounds count.
  std::size_t stop_index() const noexcept { return outer.empty() ? 0 : outer.size() - 1; }
};

struct SolverConfig {
  ImprovementConfig improve;
  std::optional<MinPolicy> start_min;
  std::optional<MaxPolicy> start_max;
  /// Skip the row-sum contraction check (e.g. omega-bar < 1 was certified).
  bool force = false;
  /// Safety net on outer / inner loop length; 0 means "number of policies".
  std::uint64_t max_iterations = 0;
};

struct DiscountedSolution {
  Vector value;
  MinPolicy min_policy;
  MaxPolicy max_policy;
  IterationTrace trace;
};

struct MeanSolution {
  EigenPair eigen;
  MinPolicy min_policy;
  MaxPolicy max_policy;
  IterationTrace trace;
  ReturnTimeResult return_times;
};

/// Nested Hoffman-Karp / Howard policy iteration for the discounted fixed
/// point v = f(v).
DiscountedSolution solve_discounted(const GameInstance& game, const SolverConfig& cfg = {});

/// Hoffman-Karp policy iteration for eta + v = f(v), v_c = 0. The common
/// renewal state hypothesis is checked first through mean_return_times.
MeanSolution solve_mean(const GameInstance& game, std::size_t c, const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Iteration bounds

/// p = 1 + floor(log(1 - lambda) / log(lambda)); p = 1 when lambda = 0.
std::uint64_t elimination_period(double lambda);

/// (m1 - n)(1 + floor(log(1 - lambda) / log(lambda))), lambda in (0, 1).
std::uint64_t bound_thm3(std::size_t m1, std::size_t n, double lambda);
/// (m + 1)(1 + log(n^2 / (1 - lambda)) / (-log(lambda))), lambda in (0, 1).
double bound_hmz(std::size_t m, std::size_t n, double lambda);
/// (m1 - n)(1 + floor(log K / log(K / (K - 1)))), K >= 1; K = 1 gives m1 - n.
std::uint64_t bound_mean(std::size_t m1, std::size_t n, double K);

enum class LambdaProvenance { GivenLambda, SpectralOmega, ReturnTimeK };

struct BoundReport {
  std::uint64_t k_max_thm3 = 0;
  std::optional<double> k_max_hmz;
  double lambda_used = 0.0;
  LambdaProvenance provenance = LambdaProvenance::GivenLambda;
};

std::string to_string(LambdaProvenance p);
std::string to_string(StopReason r);

// ---------------------------------------------------------------------------
// Runtime certificates

enum class CertCheck {
  Monotone,          // (i) v^{k+1} <= v^k
  Sandwich,          // (ii) v* <= v^{k+1} <= f(v^k) <= v^k
  Contraction,       // (iii) ||v^{k+1} - v*|| <= lambda ||v^k - v*||
  NoRevisit,         // (iv)
  ResidualSandwich,  // (v) ||R|| <= ||v^k - v*|| <= ||R|| / (1 - lambda)
  ActionElimination, // (vi)
};

std::string to_string(CertCheck c);

struct CertViolation {
  CertCheck check;
  std::size_t iteration;
  std::string detail;
};

struct CertReport {
  std::vector<CertViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
  bool passed(CertCheck c) const noexcept;
};

/// Checks a completed discounted trace against the contraction factor lambda
/// and the converged value v_star. Tolerance is 1e-8 (1 + ||v_star||_inf).
CertReport certify_trace(const GameInstance& game, const IterationTrace& trace, double lambda,
                         std::span<const double> v_star);

}  // namespace polyiter
