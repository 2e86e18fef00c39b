#include "lgol/ingestion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lgol/error.hpp"

namespace lgol {

using nlohmann::json;

namespace {

json parse_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
  }
}

// Thrown while decoding one route; converted into a Rejection.
struct RouteProblem {
  std::string file;
  std::string field_path;
  std::string reason;
};

const json& require(const json& obj, const std::string& key, const std::string& file, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw RouteProblem{file, path + "." + key, "missing field"};
  return obj.at(key);
}

double as_number(const json& v, const std::string& file, const std::string& path) {
  if (!v.is_number()) throw RouteProblem{file, path, "expected a number"};
  return v.get<double>();
}

Route decode_route(const std::string& route_id, const json& rd, const json* seq_entry, const json* tt_entry,
                   const CorpusPaths& paths) {
  const std::string rfile = paths.route_data.string();
  Route route;
  route.route_id = RouteId{route_id};

  const json& station_code = require(rd, "station_code", rfile, route_id);
  if (!station_code.is_string()) throw RouteProblem{rfile, route_id + ".station_code", "expected a string"};
  route.station = StationId{station_code.get<std::string>()};

  const json& stops = require(rd, "stops", rfile, route_id);
  if (!stops.is_object()) throw RouteProblem{rfile, route_id + ".stops", "expected an object"};
  for (const auto& [stop_id, s] : stops.items()) {
    const std::string sp = route_id + ".stops." + stop_id;
    Stop stop;
    stop.id = StopId{stop_id};
    stop.location.lat = as_number(require(s, "lat", rfile, sp), rfile, sp + ".lat");
    stop.location.lng = as_number(require(s, "lng", rfile, sp), rfile, sp + ".lng");
    const json& type = require(s, "type", rfile, sp);
    if (!type.is_string()) throw RouteProblem{rfile, sp + ".type", "expected a string"};
    stop.is_station = type.get<std::string>() == "Station";
    if (s.contains("zone_id") && s.at("zone_id").is_string() && !s.at("zone_id").get<std::string>().empty())
      stop.zone = ZoneId{s.at("zone_id").get<std::string>(), route.station};
    route.stops.push_back(std::move(stop));
  }

  const std::string tfile = paths.travel_times.string();
  if (tt_entry == nullptr) throw RouteProblem{tfile, route_id, "route missing from travel-time file"};
  const std::size_t n = route.size();
  route.travel_times = Matrix<double>(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& from = route.stops[i].id.value;
    const json& row = require(*tt_entry, from, tfile, route_id);
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& to = route.stops[j].id.value;
      const std::string path = route_id + "." + from + "." + to;
      route.travel_times(i, j) = as_number(require(row, to, tfile, route_id + "." + from), tfile, path);
    }
  }

  if (seq_entry != nullptr) {
    const std::string sfile = paths.sequences.string();
    const json& actual = require(*seq_entry, "actual", sfile, route_id);
    if (!actual.is_object()) throw RouteProblem{sfile, route_id + ".actual", "expected an object"};
    std::vector<std::pair<long long, StopIndex>> order;
    for (const auto& [stop_id, pos] : actual.items()) {
      const auto idx = route.find(StopId{stop_id});
      if (!idx) throw RouteProblem{sfile, route_id + ".actual." + stop_id, "unknown stop"};
      if (!pos.is_number_integer()) throw RouteProblem{sfile, route_id + ".actual." + stop_id, "expected an integer"};
      order.emplace_back(pos.get<long long>(), *idx);
    }
    std::sort(order.begin(), order.end());
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (order[k].first != static_cast<long long>(k))
        throw RouteProblem{sfile, route_id + ".actual", "visit orders are not 0..n"};
    }
    Sequence seq;
    for (const auto& [pos, idx] : order) seq.push_back(idx);
    route.actual_sequence = std::move(seq);
  }

  const auto violations = validate_route(route);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw RouteProblem{rfile, route_id + "." + v.field, v.invariant + (v.detail.empty() ? "" : " (" + v.detail + ")")};
  }
  return route;
}

json encode_route_data(const Route& r) {
  json stops = json::object();
  for (const auto& s : r.stops) {
    json js = {{"lat", s.location.lat}, {"lng", s.location.lng}, {"type", s.is_station ? "Station" : "Dropoff"}};
    js["zone_id"] = s.zone ? json(s.zone->value) : json(nullptr);
    stops[s.id.value] = std::move(js);
  }
  return {{"station_code", r.station.value}, {"stops", std::move(stops)}};
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Corpus Corpus::for_station(const StationId& station) const {
  Corpus out;
  for (const auto& r : routes) {
    if (r.station == station) out.add(r);
  }
  return out;
}

void Corpus::add(Route route) {
  stations.insert(route.station);
  routes.push_back(std::move(route));
}

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "route_data.json", dir / "actual_sequences.json", dir / "travel_times.json"};
}

Corpus load_corpus(const std::filesystem::path& route_data_path, const std::filesystem::path& sequence_path,
                   const std::filesystem::path& travel_time_path) {
  return load_corpus(CorpusPaths{route_data_path, sequence_path, travel_time_path});
}

Corpus load_corpus(const CorpusPaths& paths) {
  const json route_data = parse_file(paths.route_data);
  const json travel = parse_file(paths.travel_times);
  json sequences = json::object();
  if (!paths.sequences.empty() && std::filesystem::exists(paths.sequences)) sequences = parse_file(paths.sequences);
  if (!route_data.is_object()) throw Error(ErrorCode::FormatError, paths.route_data.string() + ": expected an object");
  if (!travel.is_object()) throw Error(ErrorCode::FormatError, paths.travel_times.string() + ": expected an object");
  if (!sequences.is_object()) throw Error(ErrorCode::FormatError, paths.sequences.string() + ": expected an object");

  Corpus corpus;
  for (const auto& [route_id, rd] : route_data.items()) {
    const json* seq = sequences.contains(route_id) ? &sequences.at(route_id) : nullptr;
    const json* tt = travel.contains(route_id) ? &travel.at(route_id) : nullptr;
    try {
      corpus.add(decode_route(route_id, rd, seq, tt, paths));
    } catch (const RouteProblem& p) {
      corpus.rejections.push_back({p.file, route_id, p.field_path, p.reason});
    } catch (const json::exception& e) {
      corpus.rejections.push_back({paths.route_data.string(), route_id, route_id, e.what()});
    }
  }
  return corpus;
}

Corpus impute_corpus(Corpus corpus) {
  Corpus out;
  out.rejections = std::move(corpus.rejections);
  for (auto& route : corpus.routes) {
    try {
      out.add(impute_missing_zones(route));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoZonedStops) throw;
      out.rejections.push_back({"", route.route_id.value, "stops", e.what()});
    }
  }
  return out;
}

void write_corpus(const Corpus& corpus, const CorpusPaths& paths) {
  json route_data = json::object();
  json sequences = json::object();
  json travel = json::object();
  for (const auto& r : corpus.routes) {
    route_data[r.route_id.value] = encode_route_data(r);
    json tt = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      json row = json::object();
      for (std::size_t j = 0; j < r.size(); ++j) row[r.stops[j].id.value] = r.travel_times(i, j);
      tt[r.stops[i].id.value] = std::move(row);
    }
    travel[r.route_id.value] = std::move(tt);
    if (r.actual_sequence) {
      json actual = json::object();
      for (std::size_t k = 0; k < r.actual_sequence->size(); ++k) actual[r.stops[(*r.actual_sequence)[k]].id.value] = k;
      sequences[r.route_id.value] = {{"actual", std::move(actual)}};
    }
  }
  write_text_file(paths.route_data, route_data.dump());
  write_text_file(paths.sequences, sequences.dump());
  write_text_file(paths.travel_times, travel.dump());
}

TrainTestSplit split_corpus(const Corpus& corpus, double test_fraction, std::uint64_t seed) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot split an empty corpus");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error(ErrorCode::PreconditionFailed, "test_fraction must lie in (0, 1)");

  std::mt19937_64 rng(seed);
  std::vector<bool> in_test(corpus.size(), false);
  for (const auto& station : corpus.stations) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus.routes[i].station == station) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    const auto take = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(members.size())));
    for (std::size_t k = 0; k < take && k < members.size(); ++k) in_test[members[k]] = true;
  }

  TrainTestSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < corpus.size(); ++i) (in_test[i] ? split.test : split.train).add(corpus.routes[i]);
  return split;
}

void write_predictions(const PredictionMap& predictions, const Corpus& corpus, const std::filesystem::path& path) {
  std::map<std::string, const Route*> by_id;
  for (const auto& r : corpus.routes) by_id[r.route_id.value] = &r;

  json out = json::object();
  for (const auto& [route_id, seq] : predictions) {
    const auto it = by_id.find(route_id);
    if (it == by_id.end()) throw Error(ErrorCode::PreconditionFailed, "prediction for unknown route " + route_id);
    const Route& route = *it->second;
    if (!is_permutation_of(route, seq) || !route.stops[seq.front()].is_station)
      throw Error(ErrorCode::PreconditionFailed, "prediction for " + route_id + " is not a station-first permutation");
    json proposed = json::object();
    for (std::size_t k = 0; k < seq.size(); ++k) proposed[route.stops[seq[k]].id.value] = k;
    out[route_id] = {{"proposed", std::move(proposed)}};
  }
  write_text_file(path, out.dump());
}

PredictionMap read_predictions(const std::filesystem::path& path, const Corpus& corpus) {
  const json doc = parse_file(path);
  if (!doc.is_object()) throw Error(ErrorCode::FormatError, path.string() + ": expected an object");
  std::map<std::string, const Route*> by_id;
  for (const auto& r : corpus.routes) by_id[r.route_id.value] = &r;

  PredictionMap out;
  for (const auto& [route_id, entry] : doc.items()) {
    const auto it = by_id.find(route_id);
    if (it == by_id.end()) throw Error(ErrorCode::FormatError, path.string() + ": unknown route " + route_id);
    if (!entry.is_object() || !entry.contains("proposed") || !entry.at("proposed").is_object())
      throw Error(ErrorCode::FormatError, path.string() + ": " + route_id + ".proposed missing");
    const Route& route = *it->second;
    std::vector<std::pair<long long, StopIndex>> order;
    for (const auto& [stop_id, pos] : entry.at("proposed").items()) {
      const auto idx = route.find(StopId{stop_id});
      if (!idx || !pos.is_number_integer())
        throw Error(ErrorCode::FormatError, path.string() + ": " + route_id + ".proposed." + stop_id);
      order.emplace_back(pos.get<long long>(), *idx);
    }
    std::sort(order.begin(), order.end());
    Sequence seq;
    for (const auto& [pos, idx] : order) seq.push_back(idx);
    if (!is_permutation_of(route, seq))
      throw Error(ErrorCode::FormatError, path.string() + ": " + route_id + " is not a permutation of its stops");
    out[route_id] = std::move(seq);
  }
  return out;
}

}  // namespace lgol
