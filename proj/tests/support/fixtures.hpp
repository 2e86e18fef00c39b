#pragma once

// Hand-rolled generators for property tests. Every generator takes the
// engine explicitly so a failing case can be replayed from its seed.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lgol/domain.hpp"
#include "lgol/matrix.hpp"

namespace lgol::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Matrix<double> random_cost(Rng& rng, std::size_t n, bool symmetric = false, double hi = 100.0) {
  Matrix<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) c(i, j) = symmetric && j < i ? c(j, i) : uniform_real(rng, 1.0, hi);
  return c;
}

// Permutation of 0..n-1 that keeps element 0 first.
inline std::vector<std::size_t> anchored_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  if (n > 1) std::shuffle(p.begin() + 1, p.end(), rng);
  return p;
}

inline ZoneId zone(const std::string& name, const std::string& station = "S") { return ZoneId{name, StationId{station}}; }

inline Stop station_stop(const std::string& id, GeoPoint at) { return Stop{StopId{id}, at, std::nullopt, true}; }

inline Stop zoned_stop(const std::string& id, GeoPoint at, const std::string& z, const std::string& station = "S") {
  return Stop{StopId{id}, at, zone(z, station), false};
}

// Route whose travel times are planar distances in meters divided by 10,
// plus an optional asymmetric perturbation.
inline Route route_from_stops(std::vector<Stop> stops, const std::string& station = "S", Rng* noise = nullptr,
                              const std::string& id = "R") {
  Route r;
  r.route_id = RouteId{id};
  r.station = StationId{station};
  r.stops = std::move(stops);
  const std::size_t n = r.stops.size();
  double lat0 = 0.0;
  for (const auto& s : r.stops)
    if (s.is_station) lat0 = s.location.lat;
  r.travel_times = Matrix<double>(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        r.travel_times(i, j) = planar_distance(r.stops[i].location, r.stops[j].location, lat0) / 10.0 +
                               (noise ? uniform_real(*noise, 0.0, 5.0) : 0.0);
  return r;
}

// Random zoned route: station near the origin, `zones` clusters of
// 1..max_stops stops each. Stop ids are "s00".."sNN" in random order.
inline Route random_route(Rng& rng, std::size_t zones, std::size_t max_stops, const std::string& station = "S",
                          const std::string& id = "R") {
  std::vector<Stop> stops;
  stops.push_back(station_stop("stn", {0.0, 0.0}));
  std::vector<std::string> names;
  for (std::size_t z = 0; z < zones; ++z) {
    const GeoPoint c{uniform_real(rng, 0.005, 0.05), uniform_real(rng, -0.03, 0.03)};
    const std::size_t k = uniform_index(rng, 1, max_stops);
    for (std::size_t s = 0; s < k; ++s)
      stops.push_back(zoned_stop("", {c.lat + uniform_real(rng, -0.002, 0.002), c.lng + uniform_real(rng, -0.002, 0.002)},
                                 "Z" + std::to_string(z), station));
  }
  std::vector<std::size_t> labels(stops.size());
  std::iota(labels.begin(), labels.end(), 0);
  std::shuffle(labels.begin() + 1, labels.end(), rng);
  for (std::size_t i = 1; i < stops.size(); ++i) {
    std::string v = std::to_string(labels[i]);
    stops[i].id = StopId{"s" + std::string(v.size() < 2 ? 2 - v.size() : 0, '0') + v};
  }
  Route r = route_from_stops(std::move(stops), station, &rng, id);
  Sequence actual = anchored_permutation(rng, r.size());
  r.actual_sequence = actual;
  return r;
}

// Actual sequence that keeps each zone contiguous, zones in random order.
inline Sequence zone_contiguous_sequence(Rng& rng, const Route& r) {
  auto zs = r.zones();
  std::shuffle(zs.begin(), zs.end(), rng);
  Sequence seq{r.station_index()};
  for (const auto& z : zs) {
    auto members = r.stops_in_zone(z);
    std::shuffle(members.begin(), members.end(), rng);
    seq.insert(seq.end(), members.begin(), members.end());
  }
  return seq;
}

}  // namespace lgol::testing
