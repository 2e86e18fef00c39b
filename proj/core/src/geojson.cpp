#include "lgol/geojson.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include <nlohmann/json.hpp>

#include "lgol/error.hpp"

namespace lgol {

namespace {

// Evenly spaced hues so neighbouring zone indices stay distinguishable.
std::string zone_color(std::size_t k) {
  const double hue = static_cast<double>((k * 137) % 360);
  const double x = 1.0 - std::abs(std::fmod(hue / 60.0, 2.0) - 1.0);
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue / 60.0)) {
    case 0: r = 1, g = x; break;
    case 1: r = x, g = 1; break;
    case 2: g = 1, b = x; break;
    case 3: g = x, b = 1; break;
    case 4: r = x, b = 1; break;
    default: r = 1, b = x; break;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r * 200), static_cast<int>(g * 200),
                static_cast<int>(b * 200));
  return buf;
}

}  // namespace

std::string sequence_to_geojson(const Route& route, std::span<const StopIndex> order, const std::string& label) {
  if (!is_permutation_of(route, order))
    throw Error(ErrorCode::NotPermutation, "export order is not a permutation of route " + route.route_id.value);

  std::map<ZoneId, std::size_t> zone_index;
  for (const auto& z : route.zones()) zone_index.emplace(z, zone_index.size());

  nlohmann::json coords = nlohmann::json::array();
  for (StopIndex i : order) coords.push_back({route.stops[i].location.lng, route.stops[i].location.lat});

  nlohmann::json features = nlohmann::json::array();
  features.push_back({{"type", "Feature"},
                      {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
                      {"properties", {{"route_id", route.route_id.value}, {"sequence", label}}}});
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Stop& s = route.stops[order[k]];
    nlohmann::json props = {{"stop_id", s.id.value}, {"order", k}, {"is_station", s.is_station}};
    if (s.zone) {
      props["zone_id"] = s.zone->value;
      props["marker-color"] = zone_color(zone_index.at(*s.zone));
    } else {
      props["zone_id"] = nullptr;
      props["marker-color"] = "#000000";
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {s.location.lng, s.location.lat}}}},
                        {"properties", std::move(props)}});
  }
  return nlohmann::json{{"type", "FeatureCollection"}, {"features", std::move(features)}}.dump(2);
}

}  // namespace lgol
