#include <benchmark/benchmark.h>

#include "polyiter/generator.hpp"
#include "polyiter/linalg.hpp"
#include "polyiter/perron.hpp"
#include "polyiter/policy_iteration.hpp"

using namespace polyiter;

namespace {

GameInstance cap_instance(std::size_t n, std::size_t actions, std::uint64_t seed) {
  GeneratorSpec s;
  s.n = n;
  s.a_max = actions;
  s.b_max = actions;
  s.seed = seed;
  s.family = GeneratorFamily::SubstochasticCap;
  s.lambda = 0.9;
  return generate(s);
}

void BM_SolveDiscounted(benchmark::State& state) {
  const auto g = cap_instance(static_cast<std::size_t>(state.range(0)), 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_discounted(g).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveDiscounted)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_SolveMean(benchmark::State& state) {
  GeneratorSpec s;
  s.n = static_cast<std::size_t>(state.range(0));
  s.a_max = 4;
  s.b_max = 4;
  s.seed = 2;
  s.family = GeneratorFamily::RenewalMean;
  s.p_min = 0.2;
  const auto g = generate(s);
  for (auto _ : state) benchmark::DoNotOptimize(solve_mean(g, 0).eigen.eta);
}
BENCHMARK(BM_SolveMean)->RangeMultiplier(2)->Range(4, 64);

void BM_SpectralRadius(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Xoshiro256 rng(3);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform();
  }
  for (auto _ : state) benchmark::DoNotOptimize(spectral_radius(m));
}
BENCHMARK(BM_SpectralRadius)->RangeMultiplier(2)->Range(2, 64);

void BM_HullRadius(benchmark::State& state) {
  const auto mode = state.range(1) == 0 ? RadiusMode::Enumerate : RadiusMode::BinarySearch;
  const auto g = cap_instance(static_cast<std::size_t>(state.range(0)), 2, 4);
  const MatrixFamily f = family_from_instance(g);
  for (auto _ : state) benchmark::DoNotOptimize(hull_spectral_radius(f, mode));
}
BENCHMARK(BM_HullRadius)->ArgsProduct({{2, 4, 6}, {0, 1}})->ArgNames({"n", "bisect"});

}  // namespace

BENCHMARK_MAIN();
