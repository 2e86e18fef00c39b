#include "lgol/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lgol/error.hpp"

namespace lgol {

namespace {

void normalize_by_max(Matrix<double>& m, bool& degenerate) {
  double hi = 0.0;
  for (double v : m.data()) hi = std::max(hi, v);
  degenerate = hi <= 0.0;
  if (degenerate) return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) /= hi;
}

bool in_unit(double w) { return w >= 0.0 && w <= 1.0; }

}  // namespace

std::optional<std::size_t> TransitionMatrix::index_of(const ZoneId& zone) const {
  const auto it = std::lower_bound(zones.begin(), zones.end(), zone);
  if (it == zones.end() || *it != zone) return std::nullopt;
  return static_cast<std::size_t>(it - zones.begin()) + 1;
}

TransitionMatrix to_transition_matrix(const CountMatrix& counts) {
  TransitionMatrix t{counts.station(), counts.zones(), Matrix<double>(counts.dimension(), 0.0)};
  for (std::size_t i = 0; i < counts.dimension(); ++i) {
    std::uint64_t row = 0;
    for (std::size_t j = 0; j < counts.dimension(); ++j) row += counts.at(i, j);
    if (row == 0) continue;
    for (std::size_t j = 0; j < counts.dimension(); ++j)
      t.probs(i, j) = static_cast<double>(counts.at(i, j)) / static_cast<double>(row);
  }
  return t;
}

ZoneGeometry zone_centers(const Route& route) {
  ZoneGeometry g;
  g.zones = route.zones();
  g.reference_lat = route.reference_lat();
  g.station_location = route.stops.at(route.station_index()).location;
  for (const auto& z : g.zones) {
    double lat = 0.0, lng = 0.0;
    const auto members = route.stops_in_zone(z);
    for (StopIndex i : members) {
      lat += route.stops[i].location.lat;
      lng += route.stops[i].location.lng;
    }
    const auto n = static_cast<double>(members.size());
    g.centers.push_back({lat / n, lng / n});
  }
  return g;
}

std::string_view to_string(MetricChoice m) { return m == MetricChoice::Euclidean ? "euclid" : "traveltime"; }

MetricChoice metric_from_string(std::string_view s) {
  if (s == "euclid" || s == "euclidean") return MetricChoice::Euclidean;
  if (s == "traveltime" || s == "travel_time") return MetricChoice::TravelTime;
  throw Error(ErrorCode::InvalidConfig, "unknown metric '" + std::string(s) + "'");
}

ZoneDistanceMatrix zone_distance_matrix(const ZoneGeometry& geometry) {
  const std::size_t n = geometry.dimension();
  ZoneDistanceMatrix d{Matrix<double>(n, 0.0), false};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        d.values(i, j) = planar_distance(geometry.node_location(i), geometry.node_location(j), geometry.reference_lat);
  normalize_by_max(d.values, d.degenerate);
  return d;
}

ZoneTravelTimeMatrix zone_travel_time_matrix(const Route& route, const ZoneGeometry& geometry) {
  const std::size_t n = geometry.dimension();
  ZoneTravelTimeMatrix t{Matrix<double>(n, 0.0), {}, false};
  t.anchors.push_back(route.station_index());
  for (std::size_t k = 0; k < geometry.zones.size(); ++k) {
    const auto members = route.stops_in_zone(geometry.zones[k]);
    if (members.empty()) throw Error(ErrorCode::EmptyZone, "zone " + geometry.zones[k].value + " has no stops");
    StopIndex best = members.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (StopIndex s : members) {
      const double d = planar_distance(route.stops[s].location, geometry.centers[k], geometry.reference_lat);
      if (d < best_d || (d == best_d && route.stops[s].id < route.stops[best].id)) {
        best_d = d;
        best = s;
      }
    }
    t.anchors.push_back(best);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) t.values(i, j) = route.travel_time(t.anchors[i], t.anchors[j]);
  normalize_by_max(t.values, t.degenerate);
  return t;
}

WeightConfig WeightConfig::scalar(double omega, MetricChoice metric) {
  WeightConfig w;
  w.omega = omega;
  w.structured.reset();
  w.metric = metric;
  return w;
}

WeightConfig WeightConfig::station_weights(double first, double zone, double last, MetricChoice metric) {
  WeightConfig w;
  w.omega.reset();
  w.structured = Structured{first, zone, last};
  w.metric = metric;
  return w;
}

double WeightConfig::weight(std::size_t i, std::size_t j) const {
  if (omega) return *omega;
  if (i == 0) return structured->first;
  if (j == 0) return structured->last;
  return structured->zone;
}

void WeightConfig::validate() const {
  if (omega.has_value() == structured.has_value())
    throw Error(ErrorCode::InvalidConfig, "exactly one of scalar omega or structured weights must be set");
  if (omega && !in_unit(*omega)) throw Error(ErrorCode::InvalidConfig, "omega must lie in [0, 1]");
  if (structured && !(in_unit(structured->first) && in_unit(structured->zone) && in_unit(structured->last)))
    throw Error(ErrorCode::InvalidConfig, "structured weights must lie in [0, 1]");
}

std::string WeightConfig::describe() const {
  std::ostringstream ss;
  if (omega) ss << "omega=" << *omega;
  else ss << "omega_f=" << structured->first << " omega_z=" << structured->zone << " omega_l=" << structured->last;
  ss << " metric=" << to_string(metric);
  return ss.str();
}

CostMatrix cost_matrix(const TransitionMatrix& transitions, const Matrix<double>& dist, const WeightConfig& weights,
                       const std::vector<ZoneId>& route_zones) {
  weights.validate();
  const std::size_t n = route_zones.size() + 1;
  if (dist.rows() != n || dist.cols() != n)
    throw Error(ErrorCode::IndexMismatch, "distance matrix does not cover the route's zones");

  // Model index for each route node; nullopt marks a zone never seen in training.
  std::vector<std::optional<std::size_t>> model(n);
  model[0] = 0;
  for (std::size_t k = 0; k < route_zones.size(); ++k) {
    if (route_zones[k].scope != transitions.station)
      throw Error(ErrorCode::IndexMismatch, "zone " + route_zones[k].value + " is not scoped to " +
                                                transitions.station.value);
    model[k + 1] = transitions.index_of(route_zones[k]);
  }

  CostMatrix c{Matrix<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = (model[i] && model[j]) ? transitions.probs(*model[i], *model[j]) : 0.0;
      const double w = weights.weight(i, j);
      c.values(i, j) = w * dist(i, j) + (1.0 - w) * (1.0 - p);
    }
  }
  return c;
}

}  // namespace lgol
