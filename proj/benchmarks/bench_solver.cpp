#include <benchmark/benchmark.h>

#include <random>

#include "lgol/tsp_solver.hpp"

namespace {

lgol::Matrix<double> random_costs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(1.0, 100.0);
  lgol::Matrix<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) c(i, j) = u(rng);
  return c;
}

void BM_ExactTour(benchmark::State& state) {
  const auto c = random_costs(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(lgol::solve_tour({c, 0}).objective);
}
BENCHMARK(BM_ExactTour)->DenseRange(8, 16, 4);

void BM_LocalSearchTour(benchmark::State& state) {
  const auto c = random_costs(static_cast<std::size_t>(state.range(0)), 2);
  lgol::SolverOptions o;
  o.exact_threshold = 1;
  for (auto _ : state) benchmark::DoNotOptimize(lgol::solve_tour({c, 0}, o).objective);
}
BENCHMARK(BM_LocalSearchTour)->RangeMultiplier(2)->Range(32, 256);

void BM_FreeEndPath(benchmark::State& state) {
  const auto c = random_costs(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(lgol::solve_path({c, 0, std::nullopt}).objective);
}
BENCHMARK(BM_FreeEndPath)->Arg(6)->Arg(12);

}  // namespace
