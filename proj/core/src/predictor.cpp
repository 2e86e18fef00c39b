#include "lgol/predictor.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "lgol/error.hpp"

namespace lgol {

namespace {

Matrix<double> local_costs(const Route& route, const std::vector<StopIndex>& nodes, MetricChoice metric) {
  Matrix<double> c(nodes.size(), 0.0);
  const double lat0 = route.reference_lat();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      c(i, j) = metric == MetricChoice::TravelTime
                    ? route.travel_time(nodes[i], nodes[j])
                    : planar_distance(route.stops[nodes[i]].location, route.stops[nodes[j]].location, lat0);
    }
  }
  return c;
}

}  // namespace

StopIndex select_entry_stop(const ZoneId& next_zone, const Route& route, const ZoneGeometry& geometry) {
  const auto it = std::lower_bound(geometry.zones.begin(), geometry.zones.end(), next_zone);
  if (it == geometry.zones.end() || *it != next_zone)
    throw Error(ErrorCode::EmptyZone, "zone " + next_zone.value + " has no center in this route");
  const GeoPoint& center = geometry.centers[static_cast<std::size_t>(it - geometry.zones.begin())];
  const auto members = route.stops_in_zone(next_zone);
  if (members.empty()) throw Error(ErrorCode::EmptyZone, "zone " + next_zone.value + " has no stops");
  StopIndex best = members.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (StopIndex s : members) {
    const double d = planar_distance(route.stops[s].location, center, geometry.reference_lat);
    if (d < best_d || (d == best_d && route.stops[s].id < route.stops[best].id)) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

RoutePlanner::RoutePlanner(const Route& route, PredictorOptions options)
    : route_(&route),
      options_(options),
      geometry_(zone_centers(route)),
      distances_(zone_distance_matrix(geometry_)),
      travel_(zone_travel_time_matrix(route, geometry_)) {
  for (const auto& s : route.stops) {
    if (!s.is_station && !s.zone)
      throw Error(ErrorCode::PreconditionFailed, "route " + route.route_id.value + " has unzoned stop " + s.id.value);
  }
}

StopIndex RoutePlanner::entry_stop(const ZoneId& zone) const {
  const auto it = std::lower_bound(geometry_.zones.begin(), geometry_.zones.end(), zone);
  if (it == geometry_.zones.end() || *it != zone)
    throw Error(ErrorCode::EmptyZone, "zone " + zone.value + " is not part of route " + route_->route_id.value);
  // The travel-time anchors use the same nearest-to-center rule.
  return travel_.anchors[static_cast<std::size_t>(it - geometry_.zones.begin()) + 1];
}

CostMatrix RoutePlanner::costs(const TransitionMatrix& model, const WeightConfig& weights) const {
  if (model.station != route_->station)
    throw Error(ErrorCode::StationMismatch,
                "model for " + model.station.value + " applied to route of " + route_->station.value);
  const auto& dist = weights.metric == MetricChoice::Euclidean ? distances_.values : travel_.values;
  return cost_matrix(model, dist, weights, geometry_.zones);
}

ZoneSequence RoutePlanner::zone_sequence(const TransitionMatrix& model, const WeightConfig& weights,
                                         SolveReport* report) const {
  ZoneSequence out{route_->station, {}};
  if (geometry_.zones.empty()) return out;
  const CostMatrix c = costs(model, weights);
  SolveReport tour = solve_tour({c.values, 0}, options_.solver);
  if (options_.compare_directions && tour.order.size() > 2) {
    std::vector<std::size_t> reversed{tour.order.front()};
    reversed.insert(reversed.end(), tour.order.rbegin(), tour.order.rend() - 1);
    const double back = tour_cost(c.values, reversed);
    if (back < tour.objective) {
      tour.order = std::move(reversed);
      tour.objective = back;
    }
  }
  for (std::size_t k = 1; k < tour.order.size(); ++k) out.zones.push_back(geometry_.zones[tour.order[k] - 1]);
  if (report) *report = std::move(tour);
  return out;
}

PredictedSequence RoutePlanner::stop_sequence(const ZoneSequence& zones) const {
  const Route& route = *route_;
  {
    std::set<ZoneId> given(zones.zones.begin(), zones.zones.end());
    if (given.size() != zones.zones.size() || !std::equal(given.begin(), given.end(), geometry_.zones.begin(),
                                                          geometry_.zones.end()))
      throw Error(ErrorCode::ZoneMismatch, "zone sequence does not cover exactly the zones of " + route.route_id.value);
  }

  const StopIndex station = route.station_index();
  PredictedSequence out;
  out.route_id = route.route_id;
  out.stop_order.push_back(station);

  StopIndex previous = station;
  for (std::size_t k = 0; k < zones.zones.size(); ++k) {
    const auto members = route.stops_in_zone(zones.zones[k]);
    if (members.empty()) throw Error(ErrorCode::EmptyZone, "zone " + zones.zones[k].value + " has no stops");
    const StopIndex lookahead = k + 1 < zones.zones.size() ? entry_stop(zones.zones[k + 1]) : station;

    std::vector<StopIndex> nodes{previous};
    nodes.insert(nodes.end(), members.begin(), members.end());
    SolveReport report;
    if (lookahead == previous) {
      // Single-zone route: leave the station and come back to it.
      report = solve_tour({local_costs(route, nodes, options_.local_metric), 0}, options_.solver);
      for (std::size_t p = 1; p < report.order.size(); ++p) out.stop_order.push_back(nodes[report.order[p]]);
    } else {
      nodes.push_back(lookahead);
      const std::size_t last = nodes.size() - 1;
      report = solve_path({local_costs(route, nodes, options_.local_metric), 0, last}, options_.solver);
      for (std::size_t p = 1; p + 1 < report.order.size(); ++p) out.stop_order.push_back(nodes[report.order[p]]);
    }
    out.local_reports.push_back(std::move(report));
    previous = out.stop_order.back();
  }
  out.zone_order = zone_sequence_of(route, out.stop_order);
  return out;
}

ZoneSequence predict_zone_sequence(const Route& route, const TransitionMatrix& model, const WeightConfig& weights,
                                   const PredictorOptions& options) {
  return RoutePlanner(route, options).zone_sequence(model, weights);
}

PredictedSequence predict_stop_sequence(const Route& route, const ZoneSequence& zones,
                                        const PredictorOptions& options) {
  return RoutePlanner(route, options).stop_sequence(zones);
}

PredictedSequence predict(const Route& route, const TransitionMatrix& model, const WeightConfig& weights,
                          const PredictorOptions& options) {
  const RoutePlanner planner(route, options);
  SolveReport report;
  const ZoneSequence zones = planner.zone_sequence(model, weights, &report);
  PredictedSequence out = planner.stop_sequence(zones);
  out.global_report = std::move(report);
  return out;
}

TransitionMatrix empty_model(const StationId& station) {
  return TransitionMatrix{station, {}, Matrix<double>(1, 0.0)};
}

ZoneModel::ZoneModel(const std::vector<CountMatrix>& counts) : counts_(counts) {
  for (const auto& c : counts_) transitions_.emplace(c.station(), to_transition_matrix(c));
}

ZoneModel ZoneModel::learn(const Corpus& training) { return ZoneModel(learn_counts(training)); }

void ZoneModel::ensure_stations(const std::set<StationId>& stations) {
  for (const auto& s : stations) transitions_.try_emplace(s, empty_model(s));
}

const TransitionMatrix& ZoneModel::for_station(const StationId& station) const {
  const auto it = transitions_.find(station);
  if (it == transitions_.end()) throw Error(ErrorCode::StationMismatch, "no model for station " + station.value);
  return it->second;
}

}  // namespace lgol
