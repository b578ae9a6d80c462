#include <doctest.h>

#include "polyiter/error.hpp"
#include "polyiter/game_io.hpp"
#include "polyiter/generator.hpp"
#include "polyiter/perron.hpp"
#include "polyiter/transforms.hpp"
#include "support.hpp"

using namespace polyiter;
using namespace polyiter::testing;

TEST_CASE("xoshiro is deterministic and uniform lands in [0, 1)") {
  Xoshiro256 a(42), b(42), c(43);
  bool differs = false;
  for (int k = 0; k < 1000; ++k) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
    const double u = a.uniform();
    b.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto r = a.uniform_int(3, 7);
    b.uniform_int(3, 7);
    CHECK(r >= 3);
    CHECK(r <= 7);
  }
  CHECK(differs);
}

TEST_CASE("generate is a pure function of the spec") {
  for (auto family : {GeneratorFamily::SubstochasticCap, GeneratorFamily::StateDependentDiscount,
                      GeneratorFamily::RenewalMean}) {
    GeneratorSpec s;
    s.n = 4;
    s.a_max = 3;
    s.b_max = 3;
    s.seed = 123;
    s.family = family;
    CHECK(dump_json(game_to_json(generate(s))) == dump_json(game_to_json(generate(s))));
    s.seed = 124;
    auto other = dump_json(game_to_json(generate(s)));
    s.seed = 123;
    CHECK(other != dump_json(game_to_json(generate(s))));
  }
}

TEST_CASE("generated families meet their hypotheses") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto cap = generate(substochastic(seed, 1 + seed % 6, 3, 3, 0.7));
    CHECK(validate(cap).ok());
    CHECK(max_row_sum(cap) <= 0.7 + 1e-12);

    GeneratorSpec s;
    s.seed = seed;
    s.n = 1 + seed % 5;
    s.family = GeneratorFamily::StateDependentDiscount;
    s.rho_cap = 0.8;
    auto sd = generate(s);
    CHECK(validate(sd).ok());
    CHECK(hull_spectral_radius(family_from_instance(sd), RadiusMode::Enumerate) < 0.8 + 1e-9);

    const std::size_t n = 1 + seed % 6;
    auto mean = generate(renewal(seed, n, 3, 3, seed % n, 0.3));
    CHECK(mean.payoff == PayoffMode::MeanPayoff);
    CHECK(validate(mean).ok());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < mean.num_min_actions(i); ++a) {
        for (std::size_t b = 0; b < mean.num_max_actions(i, a); ++b) {
          CHECK(mean.row(i, a, b)[seed % n] >= 0.3 - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("out-of-range specs are rejected") {
  GeneratorSpec s;
  s.lambda = 1.0;
  CHECK_THROWS_AS(check_spec(s), Error);
  s = GeneratorSpec{};
  s.n = 0;
  CHECK_THROWS_AS(generate(s), Error);
  s = GeneratorSpec{};
  s.family = GeneratorFamily::RenewalMean;
  s.c = 2;
  CHECK_THROWS_AS(check_spec(s), Error);
  s.c = 0;
  s.p_min = 0.0;
  CHECK_THROWS_AS(check_spec(s), Error);
}
