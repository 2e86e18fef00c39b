#include <gtest/gtest.h>

#include <map>
#include <set>

#include "lgol/error.hpp"
#include "lgol/synth.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace lgol;
using namespace lgol::testing;

namespace {

GeneratorConfig small() {
  GeneratorConfig g;
  g.station_count = 2;
  g.route_count = 40;
  return g;
}

// Zones of the route in visiting order, one entry per contiguous block.
std::vector<ZoneId> blocks(const Route& r) {
  std::vector<ZoneId> out;
  for (std::size_t k = 1; k < r.actual_sequence->size(); ++k) {
    const ZoneId& z = *r.stops[(*r.actual_sequence)[k]].zone;
    if (out.empty() || out.back() != z) out.push_back(z);
  }
  return out;
}

GeoPoint center_of(const Route& r, const ZoneId& z) {
  GeoPoint c{0, 0};
  const auto m = r.stops_in_zone(z);
  for (StopIndex i : m) {
    c.lat += r.stops[i].location.lat;
    c.lng += r.stops[i].location.lng;
  }
  return {c.lat / m.size(), c.lng / m.size()};
}

}  // namespace

TEST(Generate, RoutesAreValidZoneContiguousAndSized) {
  const GeneratorConfig g = small();
  const Corpus c = generate(g);
  EXPECT_EQ(c.size(), g.station_count * g.route_count);
  EXPECT_EQ(c.stations.size(), g.station_count);
  std::set<std::string> ids;
  for (const auto& r : c.routes) {
    EXPECT_TRUE(validate_route(r).empty()) << r.route_id.value;
    EXPECT_TRUE(ids.insert(r.route_id.value).second);
    const auto b = blocks(r);
    EXPECT_EQ(std::set<ZoneId>(b.begin(), b.end()).size(), b.size()) << "zone revisited in " << r.route_id.value;
    EXPECT_GE(b.size(), g.zones_per_route_min);
    EXPECT_LE(b.size(), g.zones_per_route_max);
    for (const auto& z : b) {
      const auto n = r.stops_in_zone(z).size();
      EXPECT_GE(n, g.stops_per_zone_min);
      EXPECT_LE(n, g.stops_per_zone_max);
    }
  }
}

TEST(Generate, DeterministicPerSeed) {
  GeneratorConfig g = small();
  g.route_count = 10;
  EXPECT_EQ(generate(g), generate(g));
  GeneratorConfig h = g;
  h.noise_seed = 2;
  EXPECT_NE(generate(g), generate(h));
}

TEST(Generate, FullStrengthFullBandHabitIsOnePermutation) {
  GeneratorConfig g = small();
  g.habit_strength = 1.0;
  g.habit_bands = g.zones_per_station;
  const Corpus c = generate(g);
  // No two routes of a station may order a pair of zones differently.
  std::map<StationId, std::set<std::pair<ZoneId, ZoneId>>> before;
  for (const auto& r : c.routes) {
    const auto b = blocks(r);
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) {
        EXPECT_FALSE(before[r.station].contains({b[j], b[i]})) << r.route_id.value;
        before[r.station].insert({b[i], b[j]});
      }
  }
}

TEST(Generate, WithoutHabitZonesAreVisitedNearestCenterFirst) {
  GeneratorConfig g = small();
  g.habit_strength = 0.0;
  for (const auto& r : generate(g).routes) {
    const StopIndex s = r.station_index();
    const double lat0 = r.stops[s].location.lat;
    GeoPoint cur = r.stops[s].location;
    std::set<ZoneId> left;
    for (const auto& z : r.zones()) left.insert(z);
    for (const auto& z : blocks(r)) {
      const double chosen = planar_distance(cur, center_of(r, z), lat0);
      for (const auto& other : left) EXPECT_LE(chosen, planar_distance(cur, center_of(r, other), lat0) + 1e-9);
      left.erase(z);
      cur = center_of(r, z);
    }
  }
}

TEST(Generate, ShortestPathPolicyMatchesBruteForceInsideZones) {
  GeneratorConfig g = small();
  g.noise_min_s = g.noise_max_s = 0.0;
  g.route_count = 15;
  for (const auto& r : generate(g).routes) {
    const Sequence& seq = *r.actual_sequence;
    std::size_t k = 1;
    while (k < seq.size()) {
      const ZoneId z = *r.stops[seq[k]].zone;
      std::vector<StopIndex> nodes{seq[k - 1]};
      std::size_t e = k;
      while (e < seq.size() && r.stops[seq[e]].zone == z) nodes.push_back(seq[e++]);
      Matrix<double> c(nodes.size(), 0.0);
      for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = 0; j < nodes.size(); ++j) c(i, j) = r.travel_times(nodes[i], nodes[j]);
      std::vector<std::size_t> used(nodes.size());
      std::iota(used.begin(), used.end(), 0);
      EXPECT_NEAR(oracle::path_sum(c, used), oracle::brute_path(c, 0, std::nullopt).cost, 1e-9) << r.route_id.value;
      k = e;
    }
  }
}

TEST(Generate, RandomPolicyStillKeepsZonesTogether) {
  GeneratorConfig g = small();
  g.within_zone_policy = WithinZonePolicy::Random;
  for (const auto& r : generate(g).routes) {
    const auto b = blocks(r);
    EXPECT_EQ(b.size(), r.zones().size());
  }
}

TEST(Generate, InvalidConfigurations) {
  const auto bad = [](auto edit) {
    GeneratorConfig g;
    edit(g);
    try {
      generate(g);
    } catch (const Error& e) {
      return e.code() == ErrorCode::InvalidConfig;
    }
    return false;
  };
  EXPECT_TRUE(bad([](GeneratorConfig& g) { g.station_count = 0; }));
  EXPECT_TRUE(bad([](GeneratorConfig& g) { g.habit_strength = 1.5; }));
  EXPECT_TRUE(bad([](GeneratorConfig& g) { g.zones_per_route_max = g.zones_per_station + 1; }));
  EXPECT_TRUE(bad([](GeneratorConfig& g) { g.stops_per_zone_min = 6; }));
  EXPECT_TRUE(bad([](GeneratorConfig& g) { g.habit_bands = 0; }));
  EXPECT_TRUE(bad([](GeneratorConfig& g) { g.noise_min_s = 40; }));
  EXPECT_TRUE(bad([](GeneratorConfig& g) { g.speed_mps = 0; }));
}
