#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "polyiter/game.hpp"
#include "polyiter/generator.hpp"
#include "polyiter/linalg.hpp"
#include "polyiter/perron.hpp"

namespace polyiter::testing {

struct Triple {
  double reward;
  Vector row;
};

/// states[i][a][b] -> (reward, row); max-action names are b1, b2, ...
inline GameInstance make_game(PayoffMode mode,
                              const std::vector<std::vector<std::vector<Triple>>>& states) {
  GameInstance g;
  g.payoff = mode;
  for (const auto& st : states) {
    State s;
    for (std::size_t a = 0; a < st.size(); ++a) {
      MinAction ma;
      ma.name = "a" + std::to_string(a + 1);
      for (std::size_t b = 0; b < st[a].size(); ++b) {
        ma.max_actions.push_back(MaxAction{"b" + std::to_string(b + 1), st[a][b].reward, st[a][b].row});
      }
      s.min_actions.push_back(std::move(ma));
    }
    g.states.push_back(std::move(s));
  }
  return g;
}

/// One state; a1: r = 3, M = 0.5; a2: r = 1, M = 0.9. Value 6.
inline GameInstance one_state_game() {
  return make_game(PayoffMode::Discounted, {{{{3.0, {0.5}}}, {{1.0, {0.9}}}}});
}

/// Two states swapping deterministically, rewards (0, 2). eta = 1, bias (0, 1).
inline GameInstance swap_mean_game() {
  return make_game(PayoffMode::MeanPayoff, {{{{0.0, {0.0, 1.0}}}}, {{{2.0, {1.0, 0.0}}}}});
}

/// M = [[0.5, 0.5], [1, 0]], r = (1, 0). Return times to state 1: (1.5, 1).
inline GameInstance return_time_game() {
  return make_game(PayoffMode::MeanPayoff, {{{{1.0, {0.5, 0.5}}}}, {{{0.0, {1.0, 0.0}}}}});
}

/// x solving [[a, b], [c, d]] x = (e, f) by Cramer's rule.
inline std::pair<double, double> cramer2(double a, double b, double c, double d, double e, double f) {
  const double det = a * d - b * c;
  return {(e * d - b * f) / det, (a * f - e * c) / det};
}

/// Random nonnegative matrix with roughly a third zeros.
inline Matrix random_nonnegative(Xoshiro256& rng, std::size_t n, double scale = 1.0) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (rng.uniform() < 0.33) continue;
      m(i, j) = scale * rng.uniform();
    }
  }
  return m;
}

inline Matrix random_markov(Xoshiro256& rng, std::size_t n) {
  Matrix m = random_nonnegative(rng, n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double x : m.row(i)) s += x;
    if (s == 0.0) {
      m(i, rng.uniform_int(0, n - 1)) = 1.0;
      continue;
    }
    for (double& x : m.row(i)) x /= s;
  }
  return m;
}

inline MatrixFamily random_family(Xoshiro256& rng, std::size_t n, std::size_t max_rows) {
  MatrixFamily f;
  f.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = rng.uniform_int(1, max_rows);
    for (std::size_t r = 0; r < k; ++r) {
      Vector row(n, 0.0);
      for (double& x : row) {
        if (rng.uniform() < 0.3) continue;
        x = rng.uniform();
      }
      f.rows[i].push_back(row);
    }
  }
  return f;
}

inline bool all_close(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(std::abs(a[i] - b[i]) <= tol)) return false;
  }
  return true;
}

inline GeneratorSpec substochastic(std::uint64_t seed, std::size_t n, std::size_t a, std::size_t b,
                                   double lambda) {
  GeneratorSpec s;
  s.seed = seed;
  s.n = n;
  s.a_max = a;
  s.b_max = b;
  s.family = GeneratorFamily::SubstochasticCap;
  s.lambda = lambda;
  return s;
}

inline GeneratorSpec renewal(std::uint64_t seed, std::size_t n, std::size_t a, std::size_t b,
                             std::size_t c, double p_min) {
  GeneratorSpec s;
  s.seed = seed;
  s.n = n;
  s.a_max = a;
  s.b_max = b;
  s.family = GeneratorFamily::RenewalMean;
  s.c = c;
  s.p_min = p_min;
  return s;
}

}  // namespace polyiter::testing
