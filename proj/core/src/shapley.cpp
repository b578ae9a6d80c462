#include "polyiter/shapley.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polyiter/error.hpp"

namespace polyiter {

namespace {

void check_index(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::IndexOutOfRange, what);
}

double slack(const ImprovementConfig& cfg, double best) {
  return cfg.relative ? cfg.tie_tolerance * std::max(1.0, std::abs(best)) : cfg.tie_tolerance;
}

}  // namespace

double eval_triple(const GameInstance& game, std::span<const double> v, std::size_t i,
                   std::size_t a, std::size_t b) {
  check_index(i < game.num_states(), "state index");
  check_index(a < game.num_min_actions(i), "min-action index");
  check_index(b < game.num_max_actions(i, a), "max-action index");
  check_index(v.size() == game.num_states(), "value vector length");
  const auto& t = game.states[i].min_actions[a].max_actions[b];
  double acc = 0.0;
  for (std::size_t y = 0; y < v.size(); ++y) acc += t.row[y] * v[y];
  return acc + t.reward;
}

ArgBest eval_max(const GameInstance& game, std::span<const double> v, std::size_t i,
                 std::size_t a) {
  check_index(i < game.num_states(), "state index");
  check_index(a < game.num_min_actions(i), "min-action index");
  ArgBest best{eval_triple(game, v, i, a, 0), 0};
  for (std::size_t b = 1; b < game.num_max_actions(i, a); ++b) {
    const double x = eval_triple(game, v, i, a, b);
    if (x > best.value) best = {x, b};
  }
  return best;
}

ArgBest eval_min(const GameInstance& game, std::span<const double> v, std::size_t i) {
  check_index(i < game.num_states(), "state index");
  ArgBest best{eval_max(game, v, i, 0).value, 0};
  for (std::size_t a = 1; a < game.num_min_actions(i); ++a) {
    const double x = eval_max(game, v, i, a).value;
    if (x < best.value) best = {x, a};
  }
  return best;
}

Vector eval_operator(const GameInstance& game, std::span<const double> v) {
  Vector out(game.num_states());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval_min(game, v, i).value;
  return out;
}

Vector eval_policy_min(const GameInstance& game, const MinPolicy& sigma, std::span<const double> v) {
  check_index(sigma.choice.size() == game.num_states(), "min policy length");
  Vector out(game.num_states());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval_max(game, v, i, sigma.choice[i]).value;
  return out;
}

Vector eval_policy_pair(const GameInstance& game, const MinPolicy& sigma, const MaxPolicy& delta,
                        std::span<const double> v) {
  check_index(sigma.choice.size() == game.num_states(), "min policy length");
  check_index(delta.choice.size() == game.num_states(), "max policy length");
  Vector out(game.num_states());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t a = sigma.choice[i];
    check_index(a < delta.choice[i].size(), "max policy row length");
    out[i] = eval_triple(game, v, i, a, delta.choice[i][a]);
  }
  return out;
}

MinPolicy improve_min(const GameInstance& game, std::span<const double> v, const MinPolicy& current,
                      const ImprovementConfig& cfg) {
  check_index(current.choice.size() == game.num_states(), "min policy length");
  MinPolicy next = current;
  Vector values;
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    const std::size_t na = game.num_min_actions(i);
    values.resize(na);
    for (std::size_t a = 0; a < na; ++a) values[a] = eval_max(game, v, i, a).value;
    const double best = *std::min_element(values.begin(), values.end());
    const double tol = slack(cfg, best);
    const std::size_t cur = current.choice[i];
    check_index(cur < na, "current min action");
    if (cfg.conservative && values[cur] <= best + tol) continue;
    for (std::size_t a = 0; a < na; ++a) {
      if (values[a] <= best + tol) {
        next.choice[i] = a;
        break;
      }
    }
  }
  return next;
}

MaxPolicy improve_max(const GameInstance& game, const MinPolicy& sigma, std::span<const double> v,
                      const MaxPolicy& current, const ImprovementConfig& cfg) {
  check_index(sigma.choice.size() == game.num_states(), "min policy length");
  check_index(current.choice.size() == game.num_states(), "max policy length");
  MaxPolicy next = current;
  Vector values;
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    const std::size_t a = sigma.choice[i];
    const std::size_t nb = game.num_max_actions(i, a);
    values.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) values[b] = eval_triple(game, v, i, a, b);
    const double best = *std::max_element(values.begin(), values.end());
    const double tol = slack(cfg, best);
    const std::size_t cur = current.choice[i].at(a);
    check_index(cur < nb, "current max action");
    if (cfg.conservative && values[cur] >= best - tol) continue;
    for (std::size_t b = 0; b < nb; ++b) {
      if (values[b] >= best - tol) {
        next.choice[i][a] = b;
        break;
      }
    }
  }
  return next;
}

}  // namespace polyiter
