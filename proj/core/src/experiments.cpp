#include "lgol/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lgol/baselines.hpp"
#include "lgol/error.hpp"

namespace lgol {

namespace {

using RouteRefs = std::vector<const Route*>;

const Sequence& actual_of(const Route& r) {
  if (!r.actual_sequence) throw Error(ErrorCode::MissingActualSequence, "route " + r.route_id.value);
  return *r.actual_sequence;
}

// scores[g][r]: route_score of route r under grid point g. Stop-level
// predictions are shared between weightings that yield the same zone order.
std::vector<std::vector<double>> grid_scores(const RouteRefs& routes, const ZoneModel& model,
                                             const std::vector<WeightConfig>& grid, const ExperimentOptions& opts) {
  std::vector<std::vector<double>> scores(grid.size(), std::vector<double>(routes.size(), 0.0));
  detail::parallel_for(routes.size(), opts.jobs, [&](std::size_t r) {
    const Route& route = *routes[r];
    const Sequence& actual = actual_of(route);
    const RoutePlanner planner(route, opts.predictor);
    const TransitionMatrix& transitions = model.for_station(route.station);
    std::map<std::vector<ZoneId>, double> memo;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const ZoneSequence zones = planner.zone_sequence(transitions, grid[g]);
      auto it = memo.find(zones.zones);
      if (it == memo.end()) {
        const PredictedSequence pred = planner.stop_sequence(zones);
        it = memo.emplace(zones.zones, route_score(route, actual, pred.stop_order).route_score).first;
      }
      scores[g][r] = it->second;
    }
  });
  return scores;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(precision) << v;
  return ss.str();
}

nlohmann::json weights_json(const WeightConfig& w) {
  nlohmann::json j = {{"metric", std::string(to_string(w.metric))}};
  if (w.omega) {
    j["omega"] = *w.omega;
  } else {
    j["omega_f"] = w.structured->first;
    j["omega_z"] = w.structured->zone;
    j["omega_l"] = w.structured->last;
  }
  return j;
}

}  // namespace

namespace detail {

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

std::size_t SweepResult::best_index() const {
  if (performances.empty()) throw Error(ErrorCode::EmptyInput, "empty sweep");
  return static_cast<std::size_t>(std::min_element(performances.begin(), performances.end()) - performances.begin());
}

std::vector<std::size_t> assign_folds(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InsufficientData, "cross-validation needs at least 2 folds");
  std::vector<std::size_t> fold(corpus.size(), 0);
  std::mt19937_64 rng(seed);
  for (const auto& station : corpus.stations) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus.routes[i].station == station) members.push_back(i);
    }
    if (members.size() < k)
      throw Error(ErrorCode::InsufficientData, "station " + station.value + " has " + std::to_string(members.size()) +
                                                   " routes for " + std::to_string(k) + " folds");
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t m = 0; m < members.size(); ++m) fold[members[m]] = m % k;
  }
  return fold;
}

SweepResult cross_validate(const Corpus& corpus, const std::vector<WeightConfig>& grid,
                           const ExperimentOptions& options) {
  if (grid.empty()) throw Error(ErrorCode::EmptyInput, "empty weight grid");
  for (const auto& w : grid) w.validate();
  const auto fold = assign_folds(corpus, options.folds, options.seed);

  SweepResult result;
  result.grid = grid;
  result.fold_count = options.folds;
  result.fold_performances.assign(grid.size(), std::vector<double>(options.folds, 0.0));

  for (std::size_t f = 0; f < options.folds; ++f) {
    Corpus train;
    RouteRefs held_out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (fold[i] == f) held_out.push_back(&corpus.routes[i]);
      else train.add(corpus.routes[i]);
    }
    ZoneModel model = ZoneModel::learn(train);
    model.ensure_stations(corpus.stations);
    const auto scores = grid_scores(held_out, model, grid, options);
    for (std::size_t g = 0; g < grid.size(); ++g) result.fold_performances[g][f] = mean(scores[g]);
  }
  for (const auto& per_fold : result.fold_performances) result.performances.push_back(mean(per_fold));
  return result;
}

std::vector<double> unit_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw Error(ErrorCode::InvalidConfig, "grid step must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(std::llround(1.0 / step));
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(static_cast<double>(i) / static_cast<double>(n));
  return out;
}

SweepResult omega_sweep(const Corpus& corpus, MetricChoice metric, const ExperimentOptions& options, double step) {
  std::vector<WeightConfig> grid;
  for (double w : unit_grid(step)) grid.push_back(WeightConfig::scalar(w, metric));
  return cross_validate(corpus, grid, options);
}

SweepResult station_weight_grid(const Corpus& corpus, const std::vector<double>& first_grid,
                                const std::vector<double>& zone_grid, double last, const ExperimentOptions& options) {
  std::vector<WeightConfig> grid;
  for (double f : first_grid)
    for (double z : zone_grid) grid.push_back(WeightConfig::station_weights(f, z, last));
  return cross_validate(corpus, grid, options);
}

SweepResult last_weight_sweep(const Corpus& corpus, const std::vector<std::pair<double, double>>& first_zone_pairs,
                              const std::vector<double>& last_grid, const ExperimentOptions& options) {
  std::vector<WeightConfig> grid;
  for (const auto& [f, z] : first_zone_pairs)
    for (double l : last_grid) grid.push_back(WeightConfig::station_weights(f, z, l));
  return cross_validate(corpus, grid, options);
}

CorpusScore hypothetical_oracle_run(const Corpus& test, const WeightConfig& weights,
                                    const ExperimentOptions& options) {
  weights.validate();
  std::vector<EvaluationReport> reports(test.size());
  detail::parallel_for(test.size(), options.jobs, [&](std::size_t r) {
    const Route& route = test.routes[r];
    const Sequence& actual = actual_of(route);
    const RoutePlanner planner(route, options.predictor);
    const PredictedSequence pred = planner.stop_sequence(zone_sequence_of(route, actual));
    reports[r] = route_score(route, actual, pred.stop_order);
  });
  return corpus_performance(std::move(reports));
}

CorpusScore score_lgol(const Corpus& routes, const ZoneModel& model, const WeightConfig& weights,
                       const ExperimentOptions& options) {
  std::vector<EvaluationReport> reports(routes.size());
  detail::parallel_for(routes.size(), options.jobs, [&](std::size_t r) {
    const Route& route = routes.routes[r];
    const PredictedSequence pred = predict(route, model.for_station(route.station), weights, options.predictor);
    reports[r] = route_score(route, actual_of(route), pred.stop_order);
  });
  return corpus_performance(std::move(reports));
}

const BenchmarkRow& BenchmarkTable::row(const std::string& model) const {
  for (const auto& r : rows) {
    if (r.model == model) return r;
  }
  throw Error(ErrorCode::PreconditionFailed, "no benchmark row named " + model);
}

BenchmarkTable benchmark_table(const Corpus& test, const ZoneModel& model, const WeightConfig& weights,
                               const ExperimentOptions& options) {
  weights.validate();
  if (test.empty()) throw Error(ErrorCode::EmptyCorpus, "benchmark needs test routes");
  enum { kNN, kTsp, kLgol, kHypo, kDriver, kRows };
  std::vector<std::vector<EvaluationReport>> reports(kRows, std::vector<EvaluationReport>(test.size()));
  detail::parallel_for(test.size(), options.jobs, [&](std::size_t r) {
    const Route& route = test.routes[r];
    const Sequence& actual = actual_of(route);
    reports[kNN][r] = route_score(route, actual, nearest_neighbor(route).stop_order);
    reports[kTsp][r] = route_score(route, actual, full_tsp(route, options.predictor.solver).stop_order);
    const RoutePlanner planner(route, options.predictor);
    const auto zones = planner.zone_sequence(model.for_station(route.station), weights);
    reports[kLgol][r] = route_score(route, actual, planner.stop_sequence(zones).stop_order);
    reports[kHypo][r] = route_score(route, actual, planner.stop_sequence(zone_sequence_of(route, actual)).stop_order);
    reports[kDriver][r] = route_score(route, actual, actual);
  });
  const char* names[kRows] = {"Nearest Neighbor", "Full TSP", "LG-OL", "LG-OL (hypothetical)", "Driver"};
  BenchmarkTable table;
  for (int k = 0; k < kRows; ++k) table.rows.push_back({names[k], corpus_performance(std::move(reports[k]))});
  return table;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "metric,omega,omega_f,omega_z,omega_l,performance";
  for (std::size_t f = 0; f < sweep.fold_count; ++f) out << ",fold_" << f;
  out << '\n';
  for (std::size_t g = 0; g < sweep.grid.size(); ++g) {
    const auto& w = sweep.grid[g];
    out << to_string(w.metric) << ',';
    if (w.omega) out << *w.omega << ",,,";
    else out << ',' << w.structured->first << ',' << w.structured->zone << ',' << w.structured->last;
    out << ',' << sweep.performances[g];
    for (double v : sweep.fold_performances[g]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

std::string sweep_to_json(const SweepResult& sweep) {
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t g = 0; g < sweep.grid.size(); ++g) {
    auto p = weights_json(sweep.grid[g]);
    p["performance"] = sweep.performances[g];
    p["fold_performances"] = sweep.fold_performances[g];
    points.push_back(std::move(p));
  }
  nlohmann::json doc = {{"folds", sweep.fold_count}, {"points", std::move(points)}};
  if (!sweep.performances.empty()) doc["best"] = weights_json(sweep.grid[sweep.best_index()]);
  return doc.dump(2);
}

std::string benchmark_to_csv(const BenchmarkTable& table) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "model,sd_zone,sd_stop,erp_ratio,time_s,performance\n";
  for (const auto& r : table.rows) {
    out << r.model << ',' << r.score.mean_sd_zone() << ',' << r.score.mean_sd_stop() << ','
        << r.score.mean_erp_ratio() << ',' << r.score.mean_travel_time() << ',' << r.score.performance << '\n';
  }
  return out.str();
}

std::string benchmark_to_json(const BenchmarkTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"model", r.model},
                    {"sd_zone", r.score.mean_sd_zone()},
                    {"sd_stop", r.score.mean_sd_stop()},
                    {"erp_ratio", r.score.mean_erp_ratio()},
                    {"time_s", r.score.mean_travel_time()},
                    {"performance", r.score.performance},
                    {"routes", r.score.per_route.size()}});
  }
  return nlohmann::json{{"rows", std::move(rows)}}.dump(2);
}

std::string benchmark_to_text(const BenchmarkTable& table) {
  std::ostringstream out;
  out << std::left << std::setw(22) << "Model" << std::right << std::setw(10) << "SD_zone" << std::setw(10)
      << "SD_stop" << std::setw(11) << "ERP_ratio" << std::setw(10) << "Time (s)" << std::setw(13) << "Performance"
      << '\n';
  for (const auto& r : table.rows) {
    out << std::left << std::setw(22) << r.model << std::right << std::setw(10) << fmt(r.score.mean_sd_zone())
        << std::setw(10) << fmt(r.score.mean_sd_stop()) << std::setw(11) << fmt(r.score.mean_erp_ratio())
        << std::setw(10) << fmt(r.score.mean_travel_time(), 0) << std::setw(13) << fmt(r.score.performance) << '\n';
  }
  return out.str();
}

}  // namespace lgol
