#include <benchmark/benchmark.h>

#include "lgol/baselines.hpp"
#include "lgol/predictor.hpp"
#include "lgol/synth.hpp"

namespace {

const lgol::Corpus& corpus() {
  static const lgol::Corpus c = [] {
    lgol::GeneratorConfig g;
    g.station_count = 1;
    g.route_count = 100;
    return lgol::generate(g);
  }();
  return c;
}

void BM_PredictRoute(benchmark::State& state) {
  const auto model = lgol::ZoneModel::learn(corpus());
  const auto& m = model.for_station(corpus().routes[0].station);
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& r = corpus().routes[k++ % corpus().size()];
    benchmark::DoNotOptimize(lgol::predict(r, m, lgol::WeightConfig::scalar(0.9)).stop_order.data());
  }
}
BENCHMARK(BM_PredictRoute);

void BM_FullTspBaseline(benchmark::State& state) {
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& r = corpus().routes[k++ % corpus().size()];
    benchmark::DoNotOptimize(lgol::full_tsp(r).stop_order.data());
  }
}
BENCHMARK(BM_FullTspBaseline);

void BM_LearnCounts(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lgol::learn_counts(corpus()).size());
}
BENCHMARK(BM_LearnCounts);

}  // namespace
