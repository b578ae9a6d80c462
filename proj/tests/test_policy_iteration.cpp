#include <doctest.h>

#include "polyiter/error.hpp"
#include "polyiter/oracle.hpp"
#include "polyiter/policy_iteration.hpp"
#include "polyiter/trace_io.hpp"
#include "polyiter/transforms.hpp"
#include "support.hpp"

using namespace polyiter;
using namespace polyiter::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("one-state discounted run from a2") {
  auto g = one_state_game();
  SolverConfig cfg;
  cfg.start_min = MinPolicy{{1}};
  auto sol = solve_discounted(g, cfg);
  REQUIRE(sol.trace.outer.size() == 2);
  CHECK(sol.trace.outer[0].value[0] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(sol.trace.outer[1].value[0] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(sol.trace.outer[1].sigma.choice[0] == 0);
  CHECK(sol.min_policy.choice[0] == 0);
  CHECK(sol.value[0] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(sol.trace.stopped_reason == StopReason::PolicyRepeatedStop);
  CHECK(sol.trace.stop_index() == 1);

  auto report = certify_trace(g, sol.trace, 0.9, sol.value);
  CHECK(report.ok());
}

TEST_CASE("trivial discounted runs") {
  auto g = make_game(PayoffMode::Discounted, {{{{1.0, {0.0, 0.5}}}}, {{{1.0, {0.5, 0.0}}}}});
  auto sol = solve_discounted(g);
  CHECK(sol.trace.outer.size() == 1);
  CHECK(all_close(sol.value, Vector{2.0, 2.0}, 1e-12));
  CHECK(certify_trace(g, sol.trace, 0.5, sol.value).ok());

  SolverConfig cfg;
  cfg.start_min = MinPolicy{{0}};
  auto opt = solve_discounted(one_state_game(), cfg);
  CHECK(opt.trace.outer.size() == 1);
  CHECK(opt.trace.stop_index() == 0);
}

TEST_CASE("discounted solve requires contraction unless forced") {
  auto g = make_game(PayoffMode::Discounted, {{{{1.0, {1.0}}}}});
  CHECK(code_of([&] { solve_discounted(g); }) == ErrorCode::NotContracting);
  auto bad = make_game(PayoffMode::Discounted, {{{{1.0, {-0.5}}}}});
  CHECK(code_of([&] { solve_discounted(bad); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mean runs") {
  auto sw = solve_mean(swap_mean_game(), 0);
  CHECK(sw.eigen.eta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(all_close(sw.eigen.bias, Vector{0.0, 1.0}, 1e-12));
  CHECK(sw.trace.outer.size() == 1);

  auto scalar = make_game(PayoffMode::MeanPayoff, {{{{1.0, {1.0}}}, {{2.0, {1.0}}}}});
  CHECK(solve_mean(scalar, 0).eigen.eta == doctest::Approx(1.0));

  auto constant = generate(renewal(5, 4, 3, 3, 0, 0.3));
  for (auto& st : constant.states) {
    for (auto& ma : st.min_actions) {
      for (auto& t : ma.max_actions) t.reward = 2.5;
    }
  }
  auto c = solve_mean(constant, 0);
  CHECK(c.eigen.eta == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(norm_inf(c.eigen.bias) <= 1e-12);
  CHECK(c.trace.outer.size() == 1);

  CHECK(code_of([] { solve_mean(one_state_game(), 0); }) == ErrorCode::InvalidArgument);
  auto split = make_game(PayoffMode::MeanPayoff, {{{{1.0, {1.0, 0.0}}}}, {{{2.0, {0.0, 1.0}}}}});
  CHECK(code_of([&] { solve_mean(split, 0); }) == ErrorCode::NoRenewalState);
}

TEST_CASE("iteration bounds") {
  CHECK(bound_thm3(4, 2, 0.5) == 4);
  CHECK(bound_thm3(4, 2, 0.9) == 44);
  CHECK(bound_mean(4, 2, 2.0) == 4);
  CHECK(bound_mean(4, 2, 1.0) == 2);
  CHECK(elimination_period(0.5) == 2);
  CHECK(elimination_period(0.0) == 1);
  const double hmz = bound_hmz(6, 2, 0.5);
  CHECK(hmz == doctest::Approx(7 * (1 + std::log(8.0) / std::log(2.0))));
  CHECK(code_of([] { bound_thm3(4, 2, 1.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { bound_hmz(4, 2, 0.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { bound_mean(4, 2, 0.5); }) == ErrorCode::DomainError);
}

TEST_CASE("certify_trace flags a corrupted trace") {
  auto g = one_state_game();
  SolverConfig cfg;
  cfg.start_min = MinPolicy{{1}};
  auto sol = solve_discounted(g, cfg);
  IterationTrace bad = sol.trace;
  bad.outer[1].value[0] = 11.0;
  auto report = certify_trace(g, bad, 0.9, sol.value);
  CHECK_FALSE(report.ok());
  CHECK_FALSE(report.passed(CertCheck::Monotone));

  IterationTrace revisit = sol.trace;
  revisit.outer.insert(revisit.outer.begin() + 1, revisit.outer[0]);
  CHECK_FALSE(certify_trace(g, revisit, 0.9, sol.value).passed(CertCheck::NoRevisit));
}

TEST_CASE("discounted runs agree with brute force, certify, and respect the bound") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const double lambda = seed % 2 ? 0.9 : 0.5;
    auto g = generate(substochastic(seed, 1 + seed % 5, 3, 3, lambda));
    auto sol = solve_discounted(g);
    auto brute = oracle::brute_force_discounted(g);
    CHECK(all_close(sol.value, brute.value, 1e-8 * (1 + norm_inf(brute.value))));
    Vector fv = eval_operator(g, sol.value);
    CHECK(dist_inf(fv, sol.value) <= 1e-8 * (1 + norm_inf(sol.value)));
    CHECK(eval_policy_pair(g, sol.min_policy, sol.max_policy, sol.value) == eval_policy_min(g, sol.min_policy, sol.value));
    CHECK(certify_trace(g, sol.trace, lambda, sol.value).ok());
    CHECK(sol.trace.stop_index() <= bound_thm3(count_m1(g), g.num_states(), lambda));
  }
}

TEST_CASE("inner values are nondecreasing and outer values nonincreasing") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = generate(substochastic(seed, 2 + seed % 4, 3, 3, 0.9));
    auto sol = solve_discounted(g);
    const double tol = 1e-9 * (1 + norm_inf(sol.value));
    for (std::size_t k = 0; k < sol.trace.outer.size(); ++k) {
      const auto& step = sol.trace.outer[k];
      for (std::size_t j = 1; j < step.inner.size(); ++j) {
        for (std::size_t i = 0; i < g.num_states(); ++i) {
          CHECK(step.inner[j].value[i] >= step.inner[j - 1].value[i] - tol);
        }
      }
      if (k == 0) continue;
      for (std::size_t i = 0; i < g.num_states(); ++i) {
        CHECK(step.value[i] <= sol.trace.outer[k - 1].value[i] + tol);
      }
    }
  }
}

TEST_CASE("mean runs agree with brute force and respect the bound") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1 + seed % 5;
    const std::size_t c = seed % n;
    auto g = generate(renewal(seed, n, 3, 3, c, 0.25));
    auto sol = solve_mean(g, c);
    auto brute = oracle::brute_force_mean(g, c);
    CHECK(sol.eigen.eta == doctest::Approx(brute.eigen.eta).epsilon(1e-8));
    CHECK(sol.eigen.bias[c] == 0.0);
    CHECK(sol.trace.stop_index() <= bound_mean(count_m1(g), n, sol.return_times.K));
    for (std::size_t k = 1; k < sol.trace.outer.size(); ++k) {
      CHECK(*sol.trace.outer[k].eta <= *sol.trace.outer[k - 1].eta + 1e-9);
    }
  }
}

TEST_CASE("scaling leaves the policy sequence invariant") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto g = generate(substochastic(seed, 2 + seed % 4, 3, 3, 0.9));
    Xoshiro256 rng(seed);
    Vector phi(g.num_states());
    for (double& x : phi) x = 0.1 * std::pow(100.0, rng.uniform());
    SolverConfig cfg;
    cfg.improve.relative = true;
    cfg.force = true;
    auto a = solve_discounted(g, cfg);
    auto b = solve_discounted(scale_instance(g, phi), cfg);
    REQUIRE(a.trace.outer.size() == b.trace.outer.size());
    for (std::size_t k = 0; k < a.trace.outer.size(); ++k) {
      CHECK(a.trace.outer[k].sigma == b.trace.outer[k].sigma);
      for (std::size_t i = 0; i < phi.size(); ++i) {
        CHECK(b.trace.outer[k].value[i] ==
              doctest::Approx(a.trace.outer[k].value[i] / phi[i]).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("trace JSON round trip") {
  auto g = generate(substochastic(3, 4, 3, 3, 0.9));
  auto sol = solve_discounted(g);
  auto back = trace_from_json(trace_to_json(sol.trace));
  REQUIRE(back.outer.size() == sol.trace.outer.size());
  for (std::size_t k = 0; k < back.outer.size(); ++k) {
    CHECK(back.outer[k].sigma == sol.trace.outer[k].sigma);
    CHECK(back.outer[k].value == sol.trace.outer[k].value);
    CHECK(back.outer[k].residual_norm == sol.trace.outer[k].residual_norm);
    REQUIRE(back.outer[k].inner.size() == sol.trace.outer[k].inner.size());
    for (std::size_t j = 0; j < back.outer[k].inner.size(); ++j) {
      CHECK(back.outer[k].inner[j].delta == sol.trace.outer[k].inner[j].delta);
    }
  }
  CHECK(certify_trace(g, back, 0.9, sol.value).ok());

  auto m = solve_mean(swap_mean_game(), 0);
  auto mb = trace_from_json(trace_to_json(m.trace));
  CHECK(mb.outer[0].eta == m.trace.outer[0].eta);
  CHECK(min_policy_to_json(MinPolicy{{0, 2}}) == nlohmann::json::array({1, 3}));
  CHECK(min_policy_from_json(nlohmann::json::array({2, 1})).choice == std::vector<std::size_t>{1, 0});
}
