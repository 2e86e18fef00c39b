#include "lgol/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

#include "lgol/error.hpp"

namespace lgol {

namespace {

constexpr double kEarthRadiusM = 6371000.0;

bool same_value(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoZonedStops: return "NoZonedStops";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MissingActualSequence: return "MissingActualSequence";
    case ErrorCode::StationMismatch: return "StationMismatch";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::InfeasibleAnchors: return "InfeasibleAnchors";
    case ErrorCode::EmptyZone: return "EmptyZone";
    case ErrorCode::ZoneMismatch: return "ZoneMismatch";
    case ErrorCode::NotPermutation: return "NotPermutation";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

PlanarPoint project(const GeoPoint& p, double origin_lat) {
  constexpr double deg = std::numbers::pi / 180.0;
  return {kEarthRadiusM * p.lng * deg * std::cos(origin_lat * deg), kEarthRadiusM * p.lat * deg};
}

double planar_distance(const GeoPoint& a, const GeoPoint& b, double origin_lat) {
  const auto pa = project(a, origin_lat);
  const auto pb = project(b, origin_lat);
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

StopIndex Route::station_index() const {
  for (StopIndex i = 0; i < stops.size(); ++i) {
    if (stops[i].is_station) return i;
  }
  throw Error(ErrorCode::PreconditionFailed, "route " + route_id.value + " has no station stop");
}

std::optional<StopIndex> Route::find(const StopId& id) const {
  for (StopIndex i = 0; i < stops.size(); ++i) {
    if (stops[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<ZoneId> Route::zones() const {
  std::set<ZoneId> seen;
  for (const auto& s : stops) {
    if (!s.is_station && s.zone) seen.insert(*s.zone);
  }
  return {seen.begin(), seen.end()};
}

std::vector<StopIndex> Route::stops_in_zone(const ZoneId& zone) const {
  std::vector<StopIndex> out;
  for (StopIndex i = 0; i < stops.size(); ++i) {
    if (!stops[i].is_station && stops[i].zone == zone) out.push_back(i);
  }
  return out;
}

double Route::reference_lat() const {
  for (const auto& s : stops) {
    if (s.is_station) return s.location.lat;
  }
  return stops.empty() ? 0.0 : stops.front().location.lat;
}

bool Route::operator==(const Route& other) const {
  if (route_id != other.route_id || station != other.station || stops != other.stops ||
      actual_sequence != other.actual_sequence)
    return false;
  if (travel_times.rows() != other.travel_times.rows() || travel_times.cols() != other.travel_times.cols())
    return false;
  return std::equal(travel_times.data().begin(), travel_times.data().end(), other.travel_times.data().begin(),
                    same_value);
}

std::vector<ZoneId> zones_along(const Route& route, std::span<const StopIndex> seq) {
  std::vector<ZoneId> out;
  out.reserve(seq.size());
  for (StopIndex i : seq) {
    const auto& s = route.stops.at(i);
    if (!s.is_station && s.zone) out.push_back(*s.zone);
  }
  return out;
}

double open_travel_time(const Route& route, std::span<const StopIndex> seq) {
  double total = 0.0;
  for (std::size_t k = 1; k < seq.size(); ++k) total += route.travel_time(seq[k - 1], seq[k]);
  return total;
}

bool is_permutation_of(const Route& route, std::span<const StopIndex> seq) {
  if (seq.size() != route.size()) return false;
  std::vector<bool> seen(route.size(), false);
  for (StopIndex i : seq) {
    if (i >= route.size() || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

std::vector<Violation> validate_route(const Route& route) {
  std::vector<Violation> out;
  const std::size_t n = route.size();

  if (route.route_id.empty()) out.push_back({"route_id", "non-empty", ""});
  if (route.station.empty()) out.push_back({"station", "non-empty", ""});

  std::size_t stations = 0;
  std::set<std::string> ids;
  for (const auto& s : route.stops) {
    if (s.is_station) ++stations;
    if (s.id.empty()) out.push_back({"stops.id", "non-empty", ""});
    if (!ids.insert(s.id.value).second) out.push_back({"stops.id", "unique within route", s.id.value});
    if (!s.location.valid()) out.push_back({"stops.location", "lat/lng in range", s.id.value});
    if (s.zone && s.zone->scope != route.station)
      out.push_back({"stops.zone", "zone scoped to route station", s.id.value});
  }
  if (stations != 1)
    out.push_back({"stops.is_station", "exactly one station stop", std::to_string(stations) + " found"});

  const auto& tt = route.travel_times;
  if (tt.rows() != n || tt.cols() != n) {
    out.push_back({"travel_times", "matrix completeness",
                   std::to_string(tt.rows()) + "x" + std::to_string(tt.cols()) + " for " + std::to_string(n) + " stops"});
  } else {
    bool missing = false, negative = false, diagonal = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = tt(i, j);
        if (std::isnan(v)) missing = true;
        else if (v < 0.0) negative = true;
        else if (i == j && v != 0.0) diagonal = true;
      }
    }
    if (missing) out.push_back({"travel_times", "matrix completeness", "missing entries"});
    if (negative) out.push_back({"travel_times", "nonnegative entries", ""});
    if (diagonal) out.push_back({"travel_times", "zero diagonal", ""});
  }

  if (route.actual_sequence) {
    const auto& seq = *route.actual_sequence;
    if (!is_permutation_of(route, seq)) {
      out.push_back({"actual_sequence", "visits every stop exactly once", ""});
    } else if (stations == 1 && (seq.empty() || !route.stops[seq.front()].is_station)) {
      out.push_back({"actual_sequence", "begins at the station", ""});
    }
  }
  return out;
}

Route impute_missing_zones(const Route& route) {
  std::vector<StopIndex> zoned;
  bool any_missing = false;
  for (StopIndex i = 0; i < route.size(); ++i) {
    const auto& s = route.stops[i];
    if (s.is_station) continue;
    if (s.zone) zoned.push_back(i);
    else any_missing = true;
  }
  if (zoned.empty()) throw Error(ErrorCode::NoZonedStops, "route " + route.route_id.value);
  if (!any_missing) return route;

  Route out = route;
  for (StopIndex u = 0; u < route.size(); ++u) {
    const auto& s = route.stops[u];
    if (s.is_station || s.zone) continue;
    StopIndex best = zoned.front();
    double best_t = std::numeric_limits<double>::infinity();
    for (StopIndex v : zoned) {
      const double t = route.travel_time(u, v);
      if (t < best_t || (t == best_t && route.stops[v].id < route.stops[best].id)) {
        best_t = t;
        best = v;
      }
    }
    out.stops[u].zone = route.stops[best].zone;
  }
  return out;
}

}  // namespace lgol
