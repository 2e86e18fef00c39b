#include "lgol/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lgol/error.hpp"
#include "lgol/tsp_solver.hpp"

namespace lgol {

namespace {

constexpr double kBaseLat = 47.60;
constexpr double kBaseLng = -122.33;
constexpr double kZoneSpacingLat = 0.008;
constexpr double kZoneSpacingLng = 0.011;
constexpr double kZoneJitter = 0.0015;
constexpr double kStopSpreadLat = 0.0025;
constexpr double kStopSpreadLng = 0.0035;

struct ZoneLayout {
  std::string label;
  GeoPoint center;
};

struct StationLayout {
  StationId id;
  GeoPoint location;
  std::vector<ZoneLayout> zones;
  // Habitual band order; inside a band the driver sweeps greedily.
  std::vector<std::vector<std::size_t>> habit;
};

std::string two_letter(std::size_t k) {
  return {static_cast<char>('A' + (k / 26) % 26), static_cast<char>('A' + k % 26)};
}

// Preferred band order: zones are cut column-major into strips, which lie
// side by side as seen from the station, and the strips are worked in a
// station-specific order. One strip per zone makes the habit a fixed zone
// permutation.
std::vector<std::vector<std::size_t>> band_order(std::size_t rows, std::size_t cols, std::size_t count,
                                                 std::size_t band_count, std::mt19937_64& rng) {
  const std::size_t n_bands = std::min(count, band_count);
  std::vector<std::vector<std::size_t>> bands(n_bands);
  std::size_t p = 0;
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r)
      if (r * cols + c < count) bands[p++ * n_bands / count].push_back(r * cols + c);
  std::shuffle(bands.begin(), bands.end(), rng);
  return bands;
}

StationLayout make_station(std::size_t s, const GeneratorConfig& cfg, std::mt19937_64& rng) {
  StationLayout st;
  st.id = StationId{(s + 1 < 10 ? "ST0" : "ST") + std::to_string(s + 1)};
  st.location = {kBaseLat + 0.5 * static_cast<double>(s), kBaseLng};
  const auto cols = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(cfg.zones_per_station))));
  const std::size_t rows = (cfg.zones_per_station + cols - 1) / cols;
  std::uniform_real_distribution<double> jitter(-kZoneJitter, kZoneJitter);
  for (std::size_t k = 0; k < cfg.zones_per_station; ++k) {
    const std::size_t r = k / cols, c = k % cols;
    ZoneLayout z;
    z.label = "Z-" + std::to_string(r + 1) + "." + std::to_string(c + 1);
    z.center.lat = st.location.lat + cfg.station_gap_deg + static_cast<double>(r) * kZoneSpacingLat + jitter(rng);
    z.center.lng = st.location.lng + (static_cast<double>(c) - static_cast<double>(cols - 1) / 2.0) * kZoneSpacingLng +
                   jitter(rng);
    st.zones.push_back(std::move(z));
  }
  st.habit = band_order(rows, cols, cfg.zones_per_station, cfg.habit_bands, rng);
  return st;
}

// Zone visiting order by repeatedly moving to the nearest unvisited zone center.
std::vector<std::size_t> greedy_zone_order(const GeoPoint& from, const std::vector<std::size_t>& zones,
                                           const std::vector<GeoPoint>& centers, double lat0) {
  std::vector<std::size_t> out;
  std::vector<bool> used(zones.size(), false);
  GeoPoint cur = from;
  for (std::size_t step = 0; step < zones.size(); ++step) {
    std::size_t pick = zones.size();
    double best = 0.0;
    for (std::size_t k = 0; k < zones.size(); ++k) {
      if (used[k]) continue;
      const double d = planar_distance(cur, centers[k], lat0);
      if (pick == zones.size() || d < best) {
        pick = k;
        best = d;
      }
    }
    used[pick] = true;
    out.push_back(pick);
    cur = centers[pick];
  }
  return out;
}

Route make_route(const StationLayout& st, std::size_t route_no, const GeneratorConfig& cfg, std::mt19937_64& rng) {
  const std::size_t n_zones = std::uniform_int_distribution<std::size_t>(cfg.zones_per_route_min,
                                                                         cfg.zones_per_route_max)(rng);
  std::vector<std::size_t> all(st.zones.size());
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<std::size_t> chosen(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_zones));
  std::sort(chosen.begin(), chosen.end());

  // Raw stops: index 0 is the station, then zone by zone.
  struct RawStop {
    GeoPoint location;
    std::size_t zone_slot;  // index into `chosen`; unused for the station
  };
  std::vector<RawStop> raw{{st.location, 0}};
  std::vector<std::vector<std::size_t>> members(n_zones);
  std::uniform_int_distribution<std::size_t> per_zone(cfg.stops_per_zone_min, cfg.stops_per_zone_max);
  std::uniform_real_distribution<double> dlat(-kStopSpreadLat, kStopSpreadLat);
  std::uniform_real_distribution<double> dlng(-kStopSpreadLng, kStopSpreadLng);
  for (std::size_t z = 0; z < n_zones; ++z) {
    const auto& center = st.zones[chosen[z]].center;
    const std::size_t count = per_zone(rng);
    for (std::size_t k = 0; k < count; ++k) {
      members[z].push_back(raw.size());
      raw.push_back({{center.lat + dlat(rng), center.lng + dlng(rng)}, z});
    }
  }

  const std::size_t n = raw.size();
  const double lat0 = st.location.lat;
  Matrix<double> tt(n, 0.0);
  std::uniform_real_distribution<double> noise(cfg.noise_min_s, cfg.noise_max_s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) tt(i, j) = planar_distance(raw[i].location, raw[j].location, lat0) / cfg.speed_mps + noise(rng);

  std::vector<GeoPoint> centers;
  for (const auto& m : members) {
    GeoPoint c{0.0, 0.0};
    for (std::size_t i : m) {
      c.lat += raw[i].location.lat;
      c.lng += raw[i].location.lng;
    }
    c.lat /= static_cast<double>(m.size());
    c.lng /= static_cast<double>(m.size());
    centers.push_back(c);
  }

  // Zone order: slots into `chosen`.
  std::vector<std::size_t> zone_order;
  if (std::bernoulli_distribution(cfg.habit_strength)(rng)) {
    GeoPoint cur = st.location;
    for (const auto& band : st.habit) {
      std::vector<std::size_t> slots;
      std::vector<GeoPoint> band_centers;
      for (std::size_t z : band) {
        const auto it = std::find(chosen.begin(), chosen.end(), z);
        if (it == chosen.end()) continue;
        slots.push_back(static_cast<std::size_t>(it - chosen.begin()));
        band_centers.push_back(centers[slots.back()]);
      }
      for (std::size_t k : greedy_zone_order(cur, slots, band_centers, lat0)) {
        zone_order.push_back(slots[k]);
        cur = centers[slots[k]];
      }
    }
  } else {
    std::vector<std::size_t> slots(n_zones);
    std::iota(slots.begin(), slots.end(), 0);
    zone_order = greedy_zone_order(st.location, slots, centers, lat0);
  }

  // Stop order inside each zone.
  std::vector<std::size_t> visit{0};
  for (std::size_t z : zone_order) {
    auto stops = members[z];
    if (cfg.within_zone_policy == WithinZonePolicy::Random) {
      std::shuffle(stops.begin(), stops.end(), rng);
      visit.insert(visit.end(), stops.begin(), stops.end());
      continue;
    }
    std::vector<std::size_t> nodes{visit.back()};
    nodes.insert(nodes.end(), stops.begin(), stops.end());
    Matrix<double> c(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = 0; j < nodes.size(); ++j) c(i, j) = tt(nodes[i], nodes[j]);
    const auto report = solve_path({std::move(c), 0, std::nullopt});
    for (std::size_t p = 1; p < report.order.size(); ++p) visit.push_back(nodes[report.order[p]]);
  }

  // Stop ids are distinct two-letter codes; stops are stored sorted by id.
  std::vector<std::size_t> codes(26 * 26);
  std::iota(codes.begin(), codes.end(), 0);
  std::shuffle(codes.begin(), codes.end(), rng);
  std::vector<std::size_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(), [&codes](std::size_t a, std::size_t b) { return codes[a] < codes[b]; });
  std::vector<std::size_t> slot(n);
  for (std::size_t k = 0; k < n; ++k) slot[by_id[k]] = k;

  Route route;
  std::string number = std::to_string(route_no);
  number.insert(0, number.size() < 4 ? 4 - number.size() : 0, '0');
  route.route_id = RouteId{"RouteID_" + st.id.value + "_" + number};
  route.station = st.id;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = by_id[k];
    Stop s;
    s.id = StopId{two_letter(codes[i])};
    s.location = raw[i].location;
    s.is_station = i == 0;
    if (i != 0) s.zone = ZoneId{st.zones[chosen[raw[i].zone_slot]].label, st.id};
    route.stops.push_back(std::move(s));
  }
  route.travel_times = Matrix<double>(n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) route.travel_times(slot[a], slot[b]) = tt(a, b);
  Sequence seq;
  for (std::size_t i : visit) seq.push_back(slot[i]);
  route.actual_sequence = std::move(seq);
  return route;
}

}  // namespace

std::string_view to_string(WithinZonePolicy p) {
  return p == WithinZonePolicy::ShortestPath ? "shortest_path" : "random";
}

void GeneratorConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (station_count == 0) fail("station_count must be positive");
  if (zones_per_station == 0) fail("zones_per_station must be positive");
  if (stops_per_zone_min == 0 || stops_per_zone_min > stops_per_zone_max) fail("invalid stops_per_zone range");
  if (zones_per_route_min == 0 || zones_per_route_min > zones_per_route_max) fail("invalid zones_per_route range");
  if (zones_per_route_max > zones_per_station) fail("zones_per_route_max exceeds zones_per_station");
  if (route_count == 0) fail("route_count must be positive");
  if (habit_bands == 0) fail("habit_bands must be positive");
  if (!(station_gap_deg >= 0.0)) fail("station_gap_deg must be non-negative");
  if (!(habit_strength >= 0.0 && habit_strength <= 1.0)) fail("habit_strength must lie in [0, 1]");
  if (!(noise_min_s >= 0.0 && noise_min_s <= noise_max_s)) fail("invalid noise range");
  if (!(speed_mps > 0.0)) fail("speed_mps must be positive");
  if (zones_per_route_max * stops_per_zone_max + 1 > 26 * 26) fail("too many stops per route for two-letter ids");
}

Corpus generate(const GeneratorConfig& config) {
  config.validate();
  Corpus corpus;
  for (std::size_t s = 0; s < config.station_count; ++s) {
    std::mt19937_64 rng(config.noise_seed * 0x9E3779B97F4A7C15ull + s);
    const StationLayout station = make_station(s, config, rng);
    for (std::size_t r = 0; r < config.route_count; ++r) corpus.add(make_route(station, r, config, rng));
  }
  return corpus;
}

}  // namespace lgol
