#pragma once

#include <cstdint>
#include <string_view>

#include "lgol/ingestion.hpp"

namespace lgol {

enum class WithinZonePolicy { ShortestPath, Random };

struct GeneratorConfig {
  std::size_t station_count = 5;
  std::size_t zones_per_station = 20;
  std::size_t stops_per_zone_min = 2;
  std::size_t stops_per_zone_max = 5;
  // Zones visited by one route, drawn uniformly from this range.
  std::size_t zones_per_route_min = 6;
  std::size_t zones_per_route_max = 10;
  // Routes generated for every station.
  std::size_t route_count = 300;
  // Probability that a route follows the station's habitual zone order
  // rather than the distance-greedy one.
  double habit_strength = 0.8;
  // The habit fixes the order of this many strips of the zone grid (cut
  // column-major); inside a strip zones are taken nearest-first.
  std::size_t habit_bands = 2;
  // Distance in degrees of latitude from the station to the first zone row.
  double station_gap_deg = 0.35;
  WithinZonePolicy within_zone_policy = WithinZonePolicy::ShortestPath;
  std::uint64_t noise_seed = 1;
  // Additive travel-time noise in seconds, uniform on [min, max].
  double noise_min_s = 5.0;
  double noise_max_s = 30.0;
  double speed_mps = 8.0;

  // Throws InvalidConfig.
  void validate() const;
};

// Zone-clustered routes around each station with realized sequences that
// keep every zone's stops contiguous.
Corpus generate(const GeneratorConfig& config);

std::string_view to_string(WithinZonePolicy p);

}  // namespace lgol
