#include "polyiter/generator.hpp"

#include <cmath>
#include <string>

#include "polyiter/error.hpp"

namespace polyiter {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Nonnegative weights summing to `total`; roughly a third of the entries are
// zeroed to get some sparsity, but never all of them.
Vector random_row(Xoshiro256& rng, std::size_t n, double total) {
  Vector w(n, 0.0);
  double sum = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    if (rng.uniform() < 0.33) continue;
    w[y] = rng.uniform() + 1e-3;
    sum += w[y];
  }
  if (sum == 0.0) {
    w[rng.uniform_int(0, n - 1)] = 1.0;
    sum = 1.0;
  }
  for (double& x : w) x = x / sum * total;
  return w;
}

double random_reward(Xoshiro256& rng) { return std::round((rng.uniform() * 20.0 - 10.0) * 1000.0) / 1000.0; }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Xoshiro256::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return next();  // full 64-bit range
  // Lemire-style rejection keeps the draw unbiased.
  const std::uint64_t limit = -span % span;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= limit) return lo + x % span;
  }
}

void check_spec(const GeneratorSpec& spec) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (spec.n < 1 || spec.a_max < 1 || spec.b_max < 1) fail("n, a_max, b_max must be positive");
  switch (spec.family) {
    case GeneratorFamily::SubstochasticCap:
      if (!(spec.lambda > 0.0 && spec.lambda < 1.0)) fail("lambda must lie in (0, 1)");
      break;
    case GeneratorFamily::StateDependentDiscount:
      if (!(spec.rho_cap > 0.0 && spec.rho_cap < 1.0)) fail("rho_cap must lie in (0, 1)");
      break;
    case GeneratorFamily::RenewalMean:
      if (!(spec.p_min > 0.0 && spec.p_min <= 1.0)) fail("p_min must lie in (0, 1]");
      if (spec.c >= spec.n) fail("renewal state out of range");
      break;
  }
}

GameInstance generate(const GeneratorSpec& spec) {
  check_spec(spec);
  Xoshiro256 rng(spec.seed);
  const std::size_t n = spec.n;

  GameInstance game;
  game.payoff = spec.family == GeneratorFamily::RenewalMean ? PayoffMode::MeanPayoff
                                                            : PayoffMode::Discounted;
  // Diagonal similarity for the state-dependent family: rows of D N D^{-1}
  // keep rho(N) while row sums may exceed one.
  Vector scale(n, 1.0);
  if (spec.family == GeneratorFamily::StateDependentDiscount) {
    for (double& s : scale) s = 1.0 + 3.0 * rng.uniform();
  }

  game.states.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t na = rng.uniform_int(1, spec.a_max);
    const std::size_t nb = rng.uniform_int(1, spec.b_max);
    for (std::size_t a = 0; a < na; ++a) {
      MinAction ma;
      ma.name = "a" + std::to_string(a + 1);
      for (std::size_t b = 0; b < nb; ++b) {
        MaxAction t;
        t.name = "b" + std::to_string(b + 1);
        t.reward = random_reward(rng);
        switch (spec.family) {
          case GeneratorFamily::SubstochasticCap:
            t.row = random_row(rng, n, spec.lambda * (0.5 + 0.5 * rng.uniform()));
            break;
          case GeneratorFamily::StateDependentDiscount: {
            t.row = random_row(rng, n, spec.rho_cap * (0.5 + 0.5 * rng.uniform()));
            for (std::size_t y = 0; y < n; ++y) t.row[y] = t.row[y] * scale[i] / scale[y];
            break;
          }
          case GeneratorFamily::RenewalMean: {
            t.row = random_row(rng, n, 1.0 - spec.p_min);
            t.row[spec.c] += spec.p_min;
            break;
          }
        }
        ma.max_actions.push_back(std::move(t));
      }
      game.states[i].min_actions.push_back(std::move(ma));
    }
  }
  return game;
}

}  // namespace polyiter
