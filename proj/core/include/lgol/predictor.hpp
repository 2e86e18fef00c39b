#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "lgol/cost_model.hpp"
#include "lgol/domain.hpp"
#include "lgol/ingestion.hpp"
#include "lgol/tsp_solver.hpp"
#include "lgol/zone_learning.hpp"

namespace lgol {

struct PredictedSequence {
  RouteId route_id;
  Sequence stop_order;
  ZoneSequence zone_order;
  std::optional<SolveReport> global_report;
  std::vector<SolveReport> local_reports;
};

struct PredictorOptions {
  SolverOptions solver;
  // Pick the cheaper direction of the zone tour instead of the solver's.
  bool compare_directions = false;
  // Cost used inside zones; travel time unless set to Euclidean.
  MetricChoice local_metric = MetricChoice::TravelTime;
};

// Per-route state shared by every prediction of the same route: zone
// centers, both zone-level distance backends and the entry stop of each
// zone. Build once, then predict under as many weightings as needed.
class RoutePlanner {
 public:
  RoutePlanner(const Route& route, PredictorOptions options = {});

  const Route& route() const noexcept { return *route_; }
  const ZoneGeometry& geometry() const noexcept { return geometry_; }
  const ZoneDistanceMatrix& distances() const noexcept { return distances_; }
  const ZoneTravelTimeMatrix& travel_times() const noexcept { return travel_; }

  // Stop of `zone` nearest to its center (ties: smaller StopId).
  StopIndex entry_stop(const ZoneId& zone) const;

  CostMatrix costs(const TransitionMatrix& model, const WeightConfig& weights) const;
  ZoneSequence zone_sequence(const TransitionMatrix& model, const WeightConfig& weights,
                             SolveReport* report = nullptr) const;
  PredictedSequence stop_sequence(const ZoneSequence& zones) const;

 private:
  const Route* route_;
  PredictorOptions options_;
  ZoneGeometry geometry_;
  ZoneDistanceMatrix distances_;
  ZoneTravelTimeMatrix travel_;
};

ZoneSequence predict_zone_sequence(const Route& route, const TransitionMatrix& model, const WeightConfig& weights,
                                   const PredictorOptions& options = {});

StopIndex select_entry_stop(const ZoneId& next_zone, const Route& route, const ZoneGeometry& geometry);

PredictedSequence predict_stop_sequence(const Route& route, const ZoneSequence& zones,
                                        const PredictorOptions& options = {});

PredictedSequence predict(const Route& route, const TransitionMatrix& model, const WeightConfig& weights,
                          const PredictorOptions& options = {});

// A transition model for `station` with no observations; every cost then
// falls back to the distance term plus the unfamiliarity penalty.
TransitionMatrix empty_model(const StationId& station);

// Transition matrices for every station seen in training.
class ZoneModel {
 public:
  ZoneModel() = default;
  explicit ZoneModel(const std::vector<CountMatrix>& counts);
  static ZoneModel learn(const Corpus& training);

  // Adds an observation-free matrix for each listed station without history.
  void ensure_stations(const std::set<StationId>& stations);
  bool has_station(const StationId& station) const { return transitions_.contains(station); }
  // Throws StationMismatch for a station neither learned nor ensured.
  const TransitionMatrix& for_station(const StationId& station) const;
  const std::vector<CountMatrix>& counts() const noexcept { return counts_; }

 private:
  std::vector<CountMatrix> counts_;
  std::map<StationId, TransitionMatrix> transitions_;
};

}  // namespace lgol
