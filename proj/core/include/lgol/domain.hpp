#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lgol/matrix.hpp"

namespace lgol {

// Opaque string identifier, distinct per Tag so stop, station and route
// ids cannot be mixed up.
template <typename Tag>
struct StrongId {
  std::string value;

  StrongId() = default;
  explicit StrongId(std::string v) : value(std::move(v)) {}

  bool empty() const noexcept { return value.empty(); }
  auto operator<=>(const StrongId&) const = default;
  bool operator==(const StrongId&) const = default;
};

using StopId = StrongId<struct StopTag>;
using StationId = StrongId<struct StationTag>;
using RouteId = StrongId<struct RouteTag>;

// Zone ids are only meaningful under the station that issued them; the
// same label at two stations names two unrelated areas.
struct ZoneId {
  std::string value;
  StationId scope;

  auto operator<=>(const ZoneId&) const = default;
  bool operator==(const ZoneId&) const = default;
};

struct GeoPoint {
  double lat = 0.0;
  double lng = 0.0;

  bool valid() const noexcept { return lat >= -90.0 && lat <= 90.0 && lng >= -180.0 && lng <= 180.0; }
  bool operator==(const GeoPoint&) const = default;
};

// Planar coordinates in metres on an equirectangular projection centred at
// `origin_lat`. Adequate at city scale.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

PlanarPoint project(const GeoPoint& p, double origin_lat);
double planar_distance(const GeoPoint& a, const GeoPoint& b, double origin_lat);

struct Stop {
  StopId id;
  GeoPoint location;
  std::optional<ZoneId> zone;
  bool is_station = false;

  bool operator==(const Stop&) const = default;
};

// Position of a stop inside Route::stops.
using StopIndex = std::size_t;
// A visit order expressed as stop indices.
using Sequence = std::vector<StopIndex>;

struct Route {
  RouteId route_id;
  StationId station;
  std::vector<Stop> stops;
  // Seconds, indexed by position in `stops`. NaN marks a missing entry.
  Matrix<double> travel_times;
  std::optional<Sequence> actual_sequence;

  std::size_t size() const noexcept { return stops.size(); }
  // Index of the unique station stop. Throws PreconditionFailed when absent.
  StopIndex station_index() const;
  std::optional<StopIndex> find(const StopId& id) const;
  double travel_time(StopIndex from, StopIndex to) const { return travel_times(from, to); }
  // Distinct zones of the route's non-station stops, sorted.
  std::vector<ZoneId> zones() const;
  // Non-station stops of `zone`, in stop order.
  std::vector<StopIndex> stops_in_zone(const ZoneId& zone) const;
  // Latitude used as the projection origin for planar distances.
  double reference_lat() const;

  bool operator==(const Route&) const;
};

// Zone of every stop in `seq`, skipping the station and unzoned stops.
std::vector<ZoneId> zones_along(const Route& route, std::span<const StopIndex> seq);

// Sum of travel times along `seq` without the return leg.
double open_travel_time(const Route& route, std::span<const StopIndex> seq);

struct Violation {
  std::string field;
  std::string invariant;
  std::string detail;
};

std::vector<Violation> validate_route(const Route& route);

// Assigns each unzoned non-station stop the zone of the originally zoned
// stop reachable in the least travel time; ties go to the smaller StopId.
Route impute_missing_zones(const Route& route);

// True when `seq` visits every stop of `route` exactly once.
bool is_permutation_of(const Route& route, std::span<const StopIndex> seq);

}  // namespace lgol

template <typename Tag>
struct std::hash<lgol::StrongId<Tag>> {
  std::size_t operator()(const lgol::StrongId<Tag>& id) const noexcept { return std::hash<std::string>{}(id.value); }
};

template <>
struct std::hash<lgol::ZoneId> {
  std::size_t operator()(const lgol::ZoneId& z) const noexcept {
    return std::hash<std::string>{}(z.value) * 31u ^ std::hash<std::string>{}(z.scope.value);
  }
};
