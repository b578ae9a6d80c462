#include <doctest.h>

#include "polyiter/error.hpp"
#include "polyiter/oracle.hpp"
#include "polyiter/policy_iteration.hpp"
#include "support.hpp"

using namespace polyiter;
using namespace polyiter::testing;

TEST_CASE("brute force discounted") {
  CHECK(oracle::brute_force_discounted(one_state_game()).value[0] == doctest::Approx(6.0).epsilon(1e-12));
  auto pair = make_game(PayoffMode::Discounted, {{{{1.0, {0.0, 0.5}}}}, {{{1.0, {0.5, 0.0}}}}});
  CHECK(all_close(oracle::brute_force_discounted(pair).value, Vector{2.0, 2.0}, 1e-12));

  // Duplicated actions cannot move the value.
  auto g = generate(substochastic(4, 3, 2, 2, 0.9));
  auto dup = g;
  for (auto& st : dup.states) st.min_actions.push_back(st.min_actions.front());
  CHECK(all_close(oracle::brute_force_discounted(dup).value, oracle::brute_force_discounted(g).value, 1e-12));

  CHECK_THROWS_AS(oracle::brute_force_discounted(g, 2), Error);
}

TEST_CASE("brute force mean") {
  CHECK(oracle::brute_force_mean(swap_mean_game(), 0).eigen.eta == doctest::Approx(1.0).epsilon(1e-12));
  auto min_scalar = make_game(PayoffMode::MeanPayoff, {{{{1.0, {1.0}}}, {{2.0, {1.0}}}}});
  CHECK(oracle::brute_force_mean(min_scalar, 0).eigen.eta == doctest::Approx(1.0));
  auto max_scalar = make_game(PayoffMode::MeanPayoff, {{{{1.0, {1.0}}, {2.0, {1.0}}}}});
  CHECK(oracle::brute_force_mean(max_scalar, 0).eigen.eta == doctest::Approx(2.0));
}

TEST_CASE("value iteration") {
  auto g = one_state_game();
  CHECK(oracle::value_iteration(g, Vector{0.0}, 1) == Vector{1.0});
  CHECK(oracle::value_iteration(g, Vector{4.0}, 0) == Vector{4.0});
  auto zero = make_game(PayoffMode::Discounted,
                        {{{{1.0, {0.0, 0.0}}, {3.0, {0.0, 0.0}}}, {{2.0, {0.0, 0.0}}}}, {{{-1.0, {0.0, 0.0}}}}});
  CHECK(oracle::value_iteration(zero, Vector{0.0, 0.0}, 1) == Vector{2.0, -1.0});
  CHECK(oracle::value_iteration(zero, Vector{0.0, 0.0}, 5) == Vector{2.0, -1.0});
}

TEST_CASE("value iteration converges geometrically and no faster than policy iteration") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const double lambda = 0.8;
    auto g = generate(substochastic(seed, 1 + seed % 5, 3, 3, lambda));
    auto sol = solve_discounted(g);
    Vector v(g.num_states(), 0.0);
    const double d0 = dist_inf(v, sol.value);
    for (std::size_t t = 1; t <= 30; ++t) {
      v = oracle::value_iteration(g, v, 1);
      CHECK(dist_inf(v, sol.value) <= std::pow(lambda, t) * d0 + 1e-9 * (1 + norm_inf(sol.value)));
    }
    // Policy iteration's k-th value is at least as close as k value iterations from v^0.
    const auto& outer = sol.trace.outer;
    for (std::size_t k = 1; k < outer.size(); ++k) {
      Vector vk = oracle::value_iteration(g, outer[0].value, k);
      for (std::size_t i = 0; i < vk.size(); ++i) CHECK(outer[k].value[i] <= vk[i] + 1e-9);
    }
  }
}

TEST_CASE("brute force return time") {
  CHECK(all_close(oracle::brute_force_return_time(Matrix::from_rows({{0.5, 0.5}, {1.0, 0.0}}), 0),
                  Vector{1.5, 1.0}, 1e-12));
  CHECK(oracle::brute_force_return_time(Matrix::from_rows({{1.0, 0.0}, {1.0, 0.0}}), 0) == Vector{1.0, 1.0});
  try {
    oracle::brute_force_return_time(Matrix::identity(2), 0);
    FAIL("expected SingularSystem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularSystem);
  }
}

TEST_CASE("characteristic polynomial and roots") {
  auto p = oracle::characteristic_polynomial(Matrix::from_rows({{0.5, 0.3}, {0.2, 0.4}}));
  REQUIRE(p.size() == 3);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == doctest::Approx(-0.9));
  CHECK(p[2] == doctest::Approx(0.14));
  auto roots = oracle::polynomial_roots({1.0, -6.0, 11.0, -6.0});
  std::vector<double> re;
  for (auto z : roots) re.push_back(z.real());
  std::sort(re.begin(), re.end());
  CHECK(all_close(re, Vector{1.0, 2.0, 3.0}, 1e-9));
  CHECK(oracle::spectral_radius_charpoly(Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})) == doctest::Approx(1.0));
  CHECK(oracle::spectral_radius_dense(Matrix::from_rows({{0.5, 0.3}, {0.2, 0.4}})) == doctest::Approx(0.7));
}
