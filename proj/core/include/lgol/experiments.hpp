#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lgol/cost_model.hpp"
#include "lgol/ingestion.hpp"
#include "lgol/metrics.hpp"
#include "lgol/predictor.hpp"

namespace lgol {

struct ExperimentOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
  PredictorOptions predictor;
};

struct SweepResult {
  std::vector<WeightConfig> grid;
  // Mean over folds of each fold's Performance, one per grid point.
  std::vector<double> performances;
  // fold_performances[g][f]: Performance of grid point g on held-out fold f.
  std::vector<std::vector<double>> fold_performances;
  std::size_t fold_count = 0;

  std::size_t best_index() const;
};

// Fold of every route, stratified by station: each station's routes are
// shuffled with `seed` and dealt round-robin.
std::vector<std::size_t> assign_folds(const Corpus& corpus, std::size_t k, std::uint64_t seed);

// k-fold cross-validation of LG-OL over a grid of weightings. Every fold
// learns counts on the other k - 1 folds and scores its own routes.
SweepResult cross_validate(const Corpus& corpus, const std::vector<WeightConfig>& grid,
                           const ExperimentOptions& options = {});

// 0, step, 2 step, ..., 1 (inclusive), snapped to multiples of `step`.
std::vector<double> unit_grid(double step = 0.1);

// Scalar omega over unit_grid(step) for one distance backend.
SweepResult omega_sweep(const Corpus& corpus, MetricChoice metric, const ExperimentOptions& options = {},
                        double step = 0.1);

// Structured weights over first x zone grids with a fixed return weight.
SweepResult station_weight_grid(const Corpus& corpus, const std::vector<double>& first_grid,
                                const std::vector<double>& zone_grid, double last,
                                const ExperimentOptions& options = {});

// Return-weight sensitivity at fixed (first, zone) pairs.
SweepResult last_weight_sweep(const Corpus& corpus, const std::vector<std::pair<double, double>>& first_zone_pairs,
                              const std::vector<double>& last_grid, const ExperimentOptions& options = {});

// Local stage only, fed with each route's realized zone sequence.
CorpusScore hypothetical_oracle_run(const Corpus& test, const WeightConfig& weights,
                                    const ExperimentOptions& options = {});

struct BenchmarkRow {
  std::string model;
  CorpusScore score;
};

struct BenchmarkTable {
  std::vector<BenchmarkRow> rows;
  const BenchmarkRow& row(const std::string& model) const;
};

// Nearest Neighbor, Full TSP, LG-OL, LG-OL (hypothetical) and the Driver
// identity row, all scored on `test`.
BenchmarkTable benchmark_table(const Corpus& test, const ZoneModel& model, const WeightConfig& weights,
                               const ExperimentOptions& options = {});

// One LG-OL prediction per route of `routes`, scored against actuals.
CorpusScore score_lgol(const Corpus& routes, const ZoneModel& model, const WeightConfig& weights,
                       const ExperimentOptions& options = {});

std::string sweep_to_csv(const SweepResult& sweep);
std::string sweep_to_json(const SweepResult& sweep);
std::string benchmark_to_csv(const BenchmarkTable& table);
std::string benchmark_to_json(const BenchmarkTable& table);
std::string benchmark_to_text(const BenchmarkTable& table);

namespace detail {

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace detail

}  // namespace lgol
