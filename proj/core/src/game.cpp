#include "polyiter/game.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "polyiter/error.hpp"

namespace polyiter {

namespace {

std::string coords(std::size_t i, std::size_t a, std::size_t b) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << a + 1 << "," << b + 1 << ")";
  return os.str();
}

std::uint64_t saturating_mul(std::uint64_t x, std::uint64_t y) {
  if (x != 0 && y > std::numeric_limits<std::uint64_t>::max() / x) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return x * y;
}

void check_cap(std::uint64_t count, std::uint64_t cap, const char* what) {
  if (count > cap) {
    std::ostringstream os;
    os << what << " count " << count << " exceeds enumeration cap " << cap;
    throw Error(ErrorCode::CombinatorialOverflow, os.str());
  }
}

// Odometer over digits with per-digit radices; the last digit varies fastest.
bool advance(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    if (++digits[k] < radix[k]) return true;
    digits[k] = 0;
  }
  return false;
}

}  // namespace

MinPolicy first_min_policy(const GameInstance& game) {
  return MinPolicy{std::vector<std::size_t>(game.num_states(), 0)};
}

MaxPolicy first_max_policy(const GameInstance& game) {
  MaxPolicy p;
  p.choice.resize(game.num_states());
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    p.choice[i].assign(game.num_min_actions(i), 0);
  }
  return p;
}

ValidationReport validate(const GameInstance& game) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::size_t i, std::size_t a, std::size_t b,
                 std::string msg) {
    report.violations.push_back(Violation{kind, i, a, b, std::move(msg)});
  };

  const std::size_t n = game.num_states();
  if (n == 0) {
    add(ViolationKind::NoStates, 0, 0, 0, "instance has no states");
    return report;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& st = game.states[i];
    if (st.min_actions.empty()) {
      add(ViolationKind::EmptyMinActions, i, 0, 0,
          "state " + std::to_string(i + 1) + " has no min actions");
      continue;
    }
    for (std::size_t a = 0; a < st.min_actions.size(); ++a) {
      const auto& ma = st.min_actions[a];
      if (ma.max_actions.empty()) {
        add(ViolationKind::EmptyMaxActions, i, a, 0,
            "min action (" + std::to_string(i + 1) + "," + std::to_string(a + 1) +
                ") has no max actions");
        continue;
      }
      if (a > 0) {
        const auto& ref = st.min_actions[0].max_actions;
        bool same = ref.size() == ma.max_actions.size();
        for (std::size_t b = 0; same && b < ref.size(); ++b) {
          same = ref[b].name == ma.max_actions[b].name;
        }
        if (!same) {
          add(ViolationKind::RaggedMaxActions, i, a, 0,
              "max-action list of min action (" + std::to_string(i + 1) + "," +
                  std::to_string(a + 1) + ") differs from B_" + std::to_string(i + 1));
        }
      }
      for (std::size_t b = 0; b < ma.max_actions.size(); ++b) {
        const auto& t = ma.max_actions[b];
        if (t.row.size() != n) {
          add(ViolationKind::RowLength, i, a, b,
              "row length " + std::to_string(t.row.size()) + " != n at " + coords(i, a, b));
          continue;
        }
        bool finite = std::isfinite(t.reward);
        double sum = 0.0;
        for (double x : t.row) {
          finite = finite && std::isfinite(x);
          sum += x;
        }
        if (!finite) {
          add(ViolationKind::NonFinite, i, a, b, "non-finite number at " + coords(i, a, b));
          continue;
        }
        for (std::size_t y = 0; y < n; ++y) {
          if (t.row[y] < 0.0) {
            std::ostringstream os;
            os << "negative kernel entry " << t.row[y] << " at " << coords(i, a, b)
               << " column " << y + 1;
            add(ViolationKind::NegativeEntry, i, a, b, os.str());
          }
        }
        if (game.payoff == PayoffMode::MeanPayoff && std::abs(sum - 1.0) > kRowSumTolerance) {
          std::ostringstream os;
          os.precision(17);
          os << "row sum " << sum << " != 1 at " << coords(i, a, b);
          add(ViolationKind::RowSum, i, a, b, os.str());
        }
      }
    }
  }
  return report;
}

void renormalize_rows(GameInstance& game) {
  if (game.payoff != PayoffMode::MeanPayoff) return;
  for (auto& st : game.states) {
    for (auto& ma : st.min_actions) {
      for (auto& t : ma.max_actions) {
        double sum = 0.0;
        for (double x : t.row) sum += x;
        if (sum != 1.0 && std::abs(sum - 1.0) <= kRowSumTolerance) {
          for (double& x : t.row) x /= sum;
        }
      }
    }
  }
}

std::size_t count_m1(const GameInstance& game) {
  std::size_t m1 = 0;
  for (const auto& st : game.states) m1 += st.min_actions.size();
  return m1;
}

std::size_t count_m(const GameInstance& game) {
  std::size_t m = 0;
  for (const auto& st : game.states) {
    for (const auto& ma : st.min_actions) m += ma.max_actions.size();
  }
  return m;
}

std::uint64_t count_min_policies(const GameInstance& game) {
  std::uint64_t count = 1;
  for (const auto& st : game.states) count = saturating_mul(count, st.min_actions.size());
  return count;
}

std::uint64_t count_max_policies(const GameInstance& game) {
  std::uint64_t count = 1;
  for (const auto& st : game.states) {
    for (const auto& ma : st.min_actions) count = saturating_mul(count, ma.max_actions.size());
  }
  return count;
}

std::vector<MinPolicy> enumerate_min_policies(const GameInstance& game, std::uint64_t cap) {
  check_cap(count_min_policies(game), cap, "min-policy");
  std::vector<std::size_t> radix;
  for (const auto& st : game.states) radix.push_back(st.min_actions.size());
  std::vector<MinPolicy> out;
  std::vector<std::size_t> digits(radix.size(), 0);
  do {
    out.push_back(MinPolicy{digits});
  } while (advance(digits, radix));
  return out;
}

std::vector<MaxPolicy> enumerate_max_policies(const GameInstance& game, std::uint64_t cap) {
  check_cap(count_max_policies(game), cap, "max-policy");
  std::vector<std::size_t> radix;
  for (const auto& st : game.states) {
    for (const auto& ma : st.min_actions) radix.push_back(ma.max_actions.size());
  }
  std::vector<MaxPolicy> out;
  std::vector<std::size_t> digits(radix.size(), 0);
  do {
    MaxPolicy p;
    std::size_t k = 0;
    p.choice.resize(game.num_states());
    for (std::size_t i = 0; i < game.num_states(); ++i) {
      for (std::size_t a = 0; a < game.num_min_actions(i); ++a) p.choice[i].push_back(digits[k++]);
    }
    out.push_back(std::move(p));
  } while (advance(digits, radix));
  return out;
}

}  // namespace polyiter
