#include "polyiter/policy_iteration.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "polyiter/error.hpp"
#include "polyiter/transforms.hpp"

namespace polyiter {

namespace {

void require_valid(const GameInstance& game) {
  const ValidationReport report = validate(game);
  if (!report.ok()) {
    throw Error(ErrorCode::InvalidArgument, "invalid instance: " + report.violations.front().message);
  }
}

std::uint64_t loop_limit(const SolverConfig& cfg, std::uint64_t policies) {
  if (cfg.max_iterations != 0) return cfg.max_iterations;
  return policies == std::numeric_limits<std::uint64_t>::max() ? policies : policies + 1;
}

MinPolicy start_min(const GameInstance& game, const SolverConfig& cfg) {
  if (!cfg.start_min) return first_min_policy(game);
  const MinPolicy& s = *cfg.start_min;
  bool ok = s.choice.size() == game.num_states();
  for (std::size_t i = 0; ok && i < s.choice.size(); ++i) ok = s.choice[i] < game.num_min_actions(i);
  if (!ok) throw Error(ErrorCode::InvalidArgument, "start min policy does not fit the instance");
  return s;
}

MaxPolicy start_max(const GameInstance& game, const SolverConfig& cfg) {
  if (!cfg.start_max) return first_max_policy(game);
  const MaxPolicy& s = *cfg.start_max;
  bool ok = s.choice.size() == game.num_states();
  for (std::size_t i = 0; ok && i < s.choice.size(); ++i) {
    ok = s.choice[i].size() == game.num_min_actions(i);
    for (std::size_t a = 0; ok && a < s.choice[i].size(); ++a) {
      ok = s.choice[i][a] < game.num_max_actions(i, a);
    }
  }
  if (!ok) throw Error(ErrorCode::InvalidArgument, "start max policy does not fit the instance");
  return s;
}

// Per-sigma evaluation: a fixed point (discounted) or an eigenpair (mean).
struct Evaluation {
  Vector value;
  std::optional<double> eta;
};

// One nested run of policy iteration: outer loop over sigma (min), inner
// loop over delta (max). `evaluate` solves for one policy pair.
template <class Evaluate>
std::pair<MaxPolicy, IterationTrace> nested_iteration(const GameInstance& game,
                                                      const SolverConfig& cfg, MinPolicy& sigma,
                                                      Evaluate evaluate) {
  MaxPolicy delta = start_max(game, cfg);
  IterationTrace trace;
  const std::uint64_t outer_limit = loop_limit(cfg, count_min_policies(game));
  const std::uint64_t inner_limit = loop_limit(cfg, count_max_policies(game));

  for (;;) {
    OuterStep step;
    step.sigma = sigma;
    Evaluation current;
    for (;;) {
      current = evaluate(pair_matrix(game, sigma, delta), pair_rewards(game, sigma, delta));
      step.inner.push_back(InnerStep{delta, current.value, current.eta});
      MaxPolicy next = improve_max(game, sigma, current.value, delta, cfg.improve);
      if (next == delta) break;
      delta = std::move(next);
      if (step.inner.size() >= inner_limit) {
        throw Error(ErrorCode::BoundExceeded, "inner policy iteration failed to stop");
      }
    }
    step.value = current.value;
    step.eta = current.eta;
    const Vector fv = eval_operator(game, step.value);
    double residual = 0.0;
    for (std::size_t i = 0; i < fv.size(); ++i) {
      residual = std::max(residual, std::abs(fv[i] - current.eta.value_or(0.0) - step.value[i]));
    }
    step.residual_norm = residual;
    trace.outer.push_back(std::move(step));

    MinPolicy next = improve_min(game, trace.outer.back().value, sigma, cfg.improve);
    if (next == sigma) break;
    sigma = std::move(next);
    if (trace.outer.size() >= outer_limit) {
      trace.stopped_reason = StopReason::BoundExceeded;
      throw Error(ErrorCode::BoundExceeded, "outer policy iteration failed to stop");
    }
  }
  trace.stopped_reason = StopReason::PolicyRepeatedStop;
  return {std::move(delta), std::move(trace)};
}

}  // namespace

DiscountedSolution solve_discounted(const GameInstance& game, const SolverConfig& cfg) {
  require_valid(game);
  if (!cfg.force) {
    const double lambda = max_row_sum(game);
    if (!(lambda < 1.0)) {
      std::ostringstream os;
      os << "largest kernel row sum is " << lambda << " >= 1";
      throw Error(ErrorCode::NotContracting, os.str());
    }
  }
  DiscountedSolution out;
  out.min_policy = start_min(game, cfg);
  auto [delta, trace] =
      nested_iteration(game, cfg, out.min_policy, [](const Matrix& m, const Vector& r) {
        return Evaluation{affine_fixed_point(m, r), std::nullopt};
      });
  out.max_policy = std::move(delta);
  out.trace = std::move(trace);
  out.value = out.trace.outer.back().value;
  return out;
}

MeanSolution solve_mean(const GameInstance& game, std::size_t c, const SolverConfig& cfg) {
  require_valid(game);
  if (game.payoff != PayoffMode::MeanPayoff) {
    throw Error(ErrorCode::InvalidArgument, "solve_mean needs a mean-payoff instance");
  }
  if (c >= game.num_states()) throw Error(ErrorCode::IndexOutOfRange, "renewal state");

  MeanSolution out;
  out.return_times = mean_return_times(family_from_instance(game), c);
  out.min_policy = start_min(game, cfg);
  auto [delta, trace] =
      nested_iteration(game, cfg, out.min_policy, [c](const Matrix& m, const Vector& r) {
        EigenPair e = additive_eigenpair(m, r, c);
        return Evaluation{std::move(e.bias), e.eta};
      });
  out.max_policy = std::move(delta);
  out.trace = std::move(trace);
  out.eigen.eta = *out.trace.outer.back().eta;
  out.eigen.bias = out.trace.outer.back().value;
  out.eigen.c = c;
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t elimination_period(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::DomainError, "contraction factor must lie in [0, 1)");
  }
  if (lambda == 0.0) return 1;
  return 1 + static_cast<std::uint64_t>(std::floor(std::log(1.0 - lambda) / std::log(lambda)));
}

std::uint64_t bound_thm3(std::size_t m1, std::size_t n, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw Error(ErrorCode::DomainError, "lambda must lie in (0, 1)");
  if (m1 < n) throw Error(ErrorCode::DomainError, "m1 < n");
  return static_cast<std::uint64_t>(m1 - n) * elimination_period(lambda);
}

double bound_hmz(std::size_t m, std::size_t n, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw Error(ErrorCode::DomainError, "lambda must lie in (0, 1)");
  const double nn = static_cast<double>(n);
  return static_cast<double>(m + 1) * (1.0 + std::log(nn * nn / (1.0 - lambda)) / -std::log(lambda));
}

std::uint64_t bound_mean(std::size_t m1, std::size_t n, double K) {
  if (!(K >= 1.0) || !std::isfinite(K)) throw Error(ErrorCode::DomainError, "K must be >= 1");
  if (m1 < n) throw Error(ErrorCode::DomainError, "m1 < n");
  if (K == 1.0) return m1 - n;
  const auto p = 1 + static_cast<std::uint64_t>(std::floor(std::log(K) / std::log(K / (K - 1.0))));
  return static_cast<std::uint64_t>(m1 - n) * p;
}

std::string to_string(LambdaProvenance p) {
  switch (p) {
    case LambdaProvenance::GivenLambda: return "GivenLambda";
    case LambdaProvenance::SpectralOmega: return "SpectralOmega";
    case LambdaProvenance::ReturnTimeK: return "ReturnTimeK";
  }
  return "?";
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::PolicyRepeatedStop: return "PolicyRepeatedStop";
    case StopReason::BoundExceeded: return "BoundExceeded";
    case StopReason::Error: return "Error";
  }
  return "?";
}

std::string to_string(CertCheck c) {
  switch (c) {
    case CertCheck::Monotone: return "monotone";
    case CertCheck::Sandwich: return "sandwich";
    case CertCheck::Contraction: return "contraction";
    case CertCheck::NoRevisit: return "no-revisit";
    case CertCheck::ResidualSandwich: return "residual-sandwich";
    case CertCheck::ActionElimination: return "action-elimination";
  }
  return "?";
}

bool CertReport::passed(CertCheck c) const noexcept {
  for (const auto& v : violations) {
    if (v.check == c) return false;
  }
  return true;
}

CertReport certify_trace(const GameInstance& game, const IterationTrace& trace, double lambda,
                         std::span<const double> v_star) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw Error(ErrorCode::DomainError, "contraction factor must lie in [0, 1)");
  }
  CertReport report;
  const auto& steps = trace.outer;
  const double tol = 1e-8 * (1.0 + norm_inf(v_star));
  auto flag = [&](CertCheck c, std::size_t k, const std::string& detail) {
    report.violations.push_back(CertViolation{c, k, detail});
  };
  auto leq = [tol](std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > b[i] + tol) return false;
    }
    return true;
  };

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Vector& vk = steps[k].value;
    const Vector fvk = eval_operator(game, vk);
    if (!leq(v_star, vk) || !leq(fvk, vk)) flag(CertCheck::Sandwich, k, "v* <= f(v^k) <= v^k fails");
    if (k + 1 == steps.size()) continue;
    const Vector& next = steps[k + 1].value;
    if (!leq(next, vk)) flag(CertCheck::Monotone, k + 1, "v^{k+1} > v^k");
    if (!leq(next, fvk) || !leq(v_star, next)) {
      flag(CertCheck::Sandwich, k + 1, "v* <= v^{k+1} <= f(v^k) fails");
    }
    const double before = dist_inf(vk, v_star);
    const double after = dist_inf(next, v_star);
    if (after > lambda * before + tol) {
      std::ostringstream os;
      os << after << " > " << lambda << " * " << before;
      flag(CertCheck::Contraction, k + 1, os.str());
    }
  }

  std::set<MinPolicy> seen;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!seen.insert(steps[k].sigma).second) flag(CertCheck::NoRevisit, k, "min policy revisited");
  }

  // Residuals at the optimum: R_i^a = F[v*](i, a) - v*_i.
  std::vector<Vector> residual(game.num_states());
  for (std::size_t i = 0; i < game.num_states(); ++i) {
    for (std::size_t a = 0; a < game.num_min_actions(i); ++a) {
      residual[i].push_back(eval_max(game, v_star, i, a).value - v_star[i]);
    }
  }
  const std::uint64_t p = elimination_period(lambda);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const MinPolicy& sigma = steps[k].sigma;
    std::size_t worst_state = 0;
    double worst = -std::numeric_limits<double>::infinity();
    double r_norm = 0.0;
    for (std::size_t i = 0; i < sigma.choice.size(); ++i) {
      const double r = residual[i][sigma.choice[i]];
      r_norm = std::max(r_norm, std::abs(r));
      if (r > worst) {
        worst = r;
        worst_state = i;
      }
    }
    const double gap = dist_inf(steps[k].value, v_star);
    if (r_norm > gap + tol || gap > r_norm / (1.0 - lambda) + tol) {
      std::ostringstream os;
      os << "||R|| = " << r_norm << ", ||v^k - v*|| = " << gap;
      flag(CertCheck::ResidualSandwich, k, os.str());
    }
    if (worst <= tol) continue;  // sigma^k already optimal
    const std::size_t action = sigma.choice[worst_state];
    for (std::size_t t = k + p; t < steps.size(); ++t) {
      if (steps[t].sigma.choice[worst_state] == action) {
        std::ostringstream os;
        os << "pair (" << worst_state + 1 << "," << action + 1 << ") eliminated at k = " << k
           << " reappears at t = " << t << " (p = " << p << ")";
        flag(CertCheck::ActionElimination, t, os.str());
      }
    }
  }
  return report;
}

}  // namespace polyiter
