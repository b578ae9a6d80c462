#pragma once

#include <cstddef>
#include <cstdint>

#include "polyiter/game.hpp"

namespace polyiter {

/// xoshiro256** seeded through splitmix64. Fixed so that generated files are
/// byte-reproducible across platforms and standard libraries.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

 private:
  std::uint64_t s_[4];
};

enum class GeneratorFamily {
  SubstochasticCap,        // every row sum <= lambda
  StateDependentDiscount,  // D N D^{-1} with ||N||_inf <= rho_cap, rows may exceed 1
  RenewalMean,             // Markov rows with mass >= p_min on column c
};

struct GeneratorSpec {
  std::size_t n = 2;
  std::size_t a_max = 2;
  std::size_t b_max = 2;
  std::uint64_t seed = 0;
  GeneratorFamily family = GeneratorFamily::SubstochasticCap;
  double lambda = 0.9;   // SubstochasticCap
  double rho_cap = 0.9;  // StateDependentDiscount
  std::size_t c = 0;     // RenewalMean, zero-based
  double p_min = 0.5;    // RenewalMean
};

/// Throws Error{InvalidArgument} on an out-of-range spec.
void check_spec(const GeneratorSpec& spec);

GameInstance generate(const GeneratorSpec& spec);

}  // namespace polyiter
