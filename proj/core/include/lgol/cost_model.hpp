#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lgol/domain.hpp"
#include "lgol/matrix.hpp"
#include "lgol/zone_learning.hpp"

namespace lgol {

// Row-normalized counts: probs(i, j) = N_ij / sum_j N_ij, or a zero row
// when the row has no observations. Shares the CountMatrix index.
struct TransitionMatrix {
  StationId station;
  std::vector<ZoneId> zones;
  Matrix<double> probs;

  std::optional<std::size_t> index_of(const ZoneId& zone) const;
};

TransitionMatrix to_transition_matrix(const CountMatrix& counts);

struct ZoneGeometry {
  // Sorted by zone id; node k + 1 of every per-route matrix is zones[k].
  std::vector<ZoneId> zones;
  std::vector<GeoPoint> centers;
  GeoPoint station_location;
  double reference_lat = 0.0;

  std::size_t dimension() const noexcept { return zones.size() + 1; }
  // Location of node i (0 = station).
  const GeoPoint& node_location(std::size_t i) const { return i == 0 ? station_location : centers[i - 1]; }
};

// Mean latitude/longitude of each zone's stops.
ZoneGeometry zone_centers(const Route& route);

enum class MetricChoice { Euclidean, TravelTime };

std::string_view to_string(MetricChoice m);
MetricChoice metric_from_string(std::string_view s);

// Per-route normalized station/zone distances over {station} U zones. The
// node index matches ZoneGeometry.
struct ZoneDistanceMatrix {
  Matrix<double> values;
  // Set when every center coincides; values are then all zero.
  bool degenerate = false;
};

ZoneDistanceMatrix zone_distance_matrix(const ZoneGeometry& geometry);

struct ZoneTravelTimeMatrix {
  Matrix<double> values;
  // Representative stop per node (node 0 is the station stop).
  std::vector<StopIndex> anchors;
  bool degenerate = false;
};

ZoneTravelTimeMatrix zone_travel_time_matrix(const Route& route, const ZoneGeometry& geometry);

// Either a single omega applied everywhere or separate weights for the
// station->zone row (first), zone->zone block and zone->station column (last).
struct WeightConfig {
  struct Structured {
    double first = 0.2;
    double zone = 0.8;
    double last = 1.0;
    bool operator==(const Structured&) const = default;
  };

  std::optional<double> omega = 0.9;
  std::optional<Structured> structured;
  MetricChoice metric = MetricChoice::TravelTime;

  static WeightConfig scalar(double omega, MetricChoice metric = MetricChoice::TravelTime);
  static WeightConfig station_weights(double first, double zone, double last,
                                      MetricChoice metric = MetricChoice::TravelTime);

  // Weight applied to the distance term of entry (i, j); node 0 is the station.
  double weight(std::size_t i, std::size_t j) const;
  // Throws InvalidConfig when weights are outside [0, 1] or both modes are set.
  void validate() const;
  std::string describe() const;

  bool operator==(const WeightConfig&) const = default;
};

struct CostMatrix {
  Matrix<double> values;
};

// C_ij = w_ij * dist_ij + (1 - w_ij) * (1 - P_ij) with a zero diagonal.
// `route_zones` lists the zones of nodes 1..n; zones missing from the
// transition model get P = 0 in both directions.
CostMatrix cost_matrix(const TransitionMatrix& transitions, const Matrix<double>& dist, const WeightConfig& weights,
                       const std::vector<ZoneId>& route_zones);

}  // namespace lgol
