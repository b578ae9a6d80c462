#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polyiter {

using Vector = std::vector<double>;

enum class PayoffMode { Discounted, MeanPayoff };

/// One (i, a, b) triple: the payment r_i^{ab} and the unnormalized kernel row
/// M_{i.}^{ab} = gamma(i,a,b) * P_{i.}^{ab}.
struct MaxAction {
  std::string name;
  double reward = 0.0;
  Vector row;
};

struct MinAction {
  std::string name;
  std::vector<MaxAction> max_actions;
};

struct State {
  std::vector<MinAction> min_actions;
};

/// A finite zero-sum perfect-information stochastic game. States and actions
/// are addressed by zero-based position; names are carried for I/O only.
/// Instances are treated as immutable once built.
struct GameInstance {
  PayoffMode payoff = PayoffMode::Discounted;
  std::vector<State> states;

  std::size_t num_states() const noexcept { return states.size(); }
  std::size_t num_min_actions(std::size_t i) const { return states.at(i).min_actions.size(); }
  std::size_t num_max_actions(std::size_t i, std::size_t a) const {
    return states.at(i).min_actions.at(a).max_actions.size();
  }
  const MaxAction& triple(std::size_t i, std::size_t a, std::size_t b) const {
    return states.at(i).min_actions.at(a).max_actions.at(b);
  }
  double reward(std::size_t i, std::size_t a, std::size_t b) const { return triple(i, a, b).reward; }
  std::span<const double> row(std::size_t i, std::size_t a, std::size_t b) const {
    return triple(i, a, b).row;
  }
};

/// sigma: one min-action index per state.
struct MinPolicy {
  std::vector<std::size_t> choice;
  auto operator<=>(const MinPolicy&) const = default;
};

/// delta: one max-action index per (state, min-action).
struct MaxPolicy {
  std::vector<std::vector<std::size_t>> choice;
  auto operator<=>(const MaxPolicy&) const = default;
};

MinPolicy first_min_policy(const GameInstance& game);
MaxPolicy first_max_policy(const GameInstance& game);

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  NoStates,
  EmptyMinActions,
  EmptyMaxActions,
  RowLength,
  NonFinite,
  NegativeEntry,
  RowSum,
  RaggedMaxActions,
};

struct Violation {
  ViolationKind kind;
  std::size_t state = 0;
  std::size_t min_action = 0;
  std::size_t max_action = 0;
  std::string message;  // uses 1-based coordinates
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

inline constexpr double kRowSumTolerance = 1e-9;

ValidationReport validate(const GameInstance& game);

/// Divides every mean-payoff kernel row by its actual sum. Only rows already
/// within kRowSumTolerance of 1 are touched.
void renormalize_rows(GameInstance& game);

// ---------------------------------------------------------------------------
// Combinatorial quantities

std::size_t count_m1(const GameInstance& game);
std::size_t count_m(const GameInstance& game);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Number of min policies, saturating at UINT64_MAX.
std::uint64_t count_min_policies(const GameInstance& game);
/// Number of max policies over (state, min-action) pairs, saturating.
std::uint64_t count_max_policies(const GameInstance& game);

std::vector<MinPolicy> enumerate_min_policies(const GameInstance& game,
                                              std::uint64_t cap = kDefaultEnumerationCap);
std::vector<MaxPolicy> enumerate_max_policies(const GameInstance& game,
                                              std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace polyiter
