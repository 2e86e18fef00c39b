#include "lgol/zone_learning.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "lgol/error.hpp"

namespace lgol {

namespace {

void merge_adjacent(std::vector<RunLengthPair>& pairs) {
  std::vector<RunLengthPair> merged;
  merged.reserve(pairs.size());
  for (auto& p : pairs) {
    if (!merged.empty() && merged.back().zone == p.zone) merged.back().count += p.count;
    else merged.push_back(std::move(p));
  }
  pairs = std::move(merged);
}

}  // namespace

std::vector<RunLengthPair> run_length_encode(std::span<const ZoneId> zones) {
  std::vector<RunLengthPair> pairs;
  for (const auto& z : zones) {
    if (!pairs.empty() && pairs.back().zone == z) ++pairs.back().count;
    else pairs.push_back({z, 1});
  }
  return pairs;
}

ZoneSequence to_zone_sequence(std::span<const ZoneId> stop_zones) {
  if (stop_zones.empty()) throw Error(ErrorCode::EmptyInput, "zone list is empty");
  auto pairs = run_length_encode(stop_zones);

  for (;;) {
    // Run count and first position per zone.
    std::map<ZoneId, std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto [it, inserted] = runs.try_emplace(pairs[i].zone, 0, i);
      ++it->second.first;
    }
    const ZoneId* target = nullptr;
    std::size_t best_runs = 1, best_first = 0;
    for (const auto& [zone, info] : runs) {
      const auto [n_runs, first] = info;
      if (n_runs > best_runs || (n_runs == best_runs && n_runs > 1 && first < best_first)) {
        target = &zone;
        best_runs = n_runs;
        best_first = first;
      }
    }
    if (target == nullptr) break;

    std::size_t keep = pairs.size();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].zone == *target && (keep == pairs.size() || pairs[i].count > pairs[keep].count)) keep = i;
    }
    const ZoneId zone = *target;
    std::vector<RunLengthPair> kept;
    kept.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].zone != zone || i == keep) kept.push_back(pairs[i]);
    }
    pairs = std::move(kept);
    merge_adjacent(pairs);
  }

  ZoneSequence out;
  out.station = stop_zones.front().scope;
  out.zones.reserve(pairs.size());
  for (auto& p : pairs) out.zones.push_back(std::move(p.zone));
  return out;
}

ZoneSequence zone_sequence_of(const Route& route, std::span<const StopIndex> seq) {
  const auto zones = zones_along(route, seq);
  if (zones.empty()) return ZoneSequence{route.station, {}};
  auto out = to_zone_sequence(zones);
  out.station = route.station;
  return out;
}

CountMatrix::CountMatrix(StationId station, std::vector<ZoneId> zones)
    : station_(std::move(station)), zones_(std::move(zones)) {
  std::sort(zones_.begin(), zones_.end());
  zones_.erase(std::unique(zones_.begin(), zones_.end()), zones_.end());
  counts_ = Matrix<std::uint64_t>(zones_.size() + 1, std::uint64_t{0});
}

CountMatrix CountMatrix::from_raw(StationId station, std::vector<ZoneId> zones, Matrix<std::uint64_t> counts) {
  CountMatrix m(std::move(station), std::move(zones));
  if (counts.rows() != m.dimension() || counts.cols() != m.dimension())
    throw Error(ErrorCode::IndexMismatch, "count matrix dimension does not match its index");
  m.counts_ = std::move(counts);
  return m;
}

std::optional<std::size_t> CountMatrix::index_of(const ZoneId& zone) const {
  const auto it = std::lower_bound(zones_.begin(), zones_.end(), zone);
  if (it == zones_.end() || *it != zone) return std::nullopt;
  return static_cast<std::size_t>(it - zones_.begin()) + 1;
}

std::uint64_t CountMatrix::total() const {
  std::uint64_t sum = 0;
  for (auto v : counts_.data()) sum += v;
  return sum;
}

void CountMatrix::add_sequence(const ZoneSequence& seq) {
  if (seq.zones.empty()) return;
  if (seq.station != station_)
    throw Error(ErrorCode::StationMismatch, "sequence of " + seq.station.value + " added to " + station_.value);
  std::vector<std::size_t> nodes{0};
  for (const auto& z : seq.zones) {
    const auto idx = index_of(z);
    if (!idx) throw Error(ErrorCode::IndexMismatch, "zone " + z.value + " not in count matrix index");
    nodes.push_back(*idx);
  }
  nodes.push_back(0);
  for (std::size_t k = 1; k < nodes.size(); ++k) ++counts_(nodes[k - 1], nodes[k]);
}

void CountMatrix::merge(const CountMatrix& other) {
  if (other.station_ != station_)
    throw Error(ErrorCode::StationMismatch, "cannot merge " + other.station_.value + " into " + station_.value);
  std::vector<ZoneId> all = zones_;
  all.insert(all.end(), other.zones_.begin(), other.zones_.end());
  CountMatrix merged(station_, std::move(all));
  auto remap = [&merged](const CountMatrix& src) {
    std::vector<std::size_t> to{0};
    for (const auto& z : src.zones_) to.push_back(*merged.index_of(z));
    for (std::size_t i = 0; i < src.dimension(); ++i)
      for (std::size_t j = 0; j < src.dimension(); ++j) merged.counts_(to[i], to[j]) += src.counts_(i, j);
  };
  remap(*this);
  remap(other);
  *this = std::move(merged);
}

CountMatrix accumulate_counts(const Corpus& station_corpus, const StationId& station) {
  std::vector<ZoneSequence> sequences;
  std::vector<ZoneId> zones;
  for (const auto& route : station_corpus.routes) {
    if (route.station != station)
      throw Error(ErrorCode::StationMismatch, "route " + route.route_id.value + " belongs to " + route.station.value);
    if (!route.actual_sequence)
      throw Error(ErrorCode::MissingActualSequence, "route " + route.route_id.value);
    auto seq = zone_sequence_of(route, *route.actual_sequence);
    zones.insert(zones.end(), seq.zones.begin(), seq.zones.end());
    sequences.push_back(std::move(seq));
  }
  CountMatrix m(station, std::move(zones));
  for (const auto& seq : sequences) m.add_sequence(seq);
  return m;
}

std::vector<CountMatrix> learn_counts(const Corpus& corpus) {
  std::vector<CountMatrix> out;
  for (const auto& station : corpus.stations) out.push_back(accumulate_counts(corpus.for_station(station), station));
  return out;
}

std::string count_matrix_to_json(const CountMatrix& m) {
  nlohmann::json index = nlohmann::json::array({m.station().value});
  for (const auto& z : m.zones()) index.push_back(z.value);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.dimension(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.dimension(); ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"station", m.station().value}, {"index", std::move(index)}, {"counts", std::move(rows)}}.dump();
}

CountMatrix count_matrix_from_json(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    StationId station{doc.at("station").get<std::string>()};
    const auto& index = doc.at("index");
    if (index.empty() || index.at(0).get<std::string>() != station.value)
      throw Error(ErrorCode::FormatError, "count matrix index must start with the station");
    std::vector<ZoneId> zones;
    for (std::size_t i = 1; i < index.size(); ++i) zones.push_back({index.at(i).get<std::string>(), station});
    CountMatrix m(station, zones);
    if (m.dimension() != index.size()) throw Error(ErrorCode::FormatError, "count matrix index has duplicates");

    const auto& rows = doc.at("counts");
    if (rows.size() != index.size()) throw Error(ErrorCode::FormatError, "count matrix is not square");
    // The stored index need not be sorted; map each label to its position.
    std::vector<std::size_t> to{0};
    for (const auto& z : zones) to.push_back(*m.index_of(z));
    Matrix<std::uint64_t> raw(index.size(), std::uint64_t{0});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows.at(i).size() != index.size()) throw Error(ErrorCode::FormatError, "count matrix is not square");
      for (std::size_t j = 0; j < rows.size(); ++j) raw(to[i], to[j]) = rows.at(i).at(j).get<std::uint64_t>();
    }
    return CountMatrix::from_raw(station, m.zones(), std::move(raw));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("count matrix: ") + e.what());
  }
}

void save_count_matrix(const CountMatrix& m, const std::filesystem::path& path) {
  write_text_file(path, count_matrix_to_json(m));
}

CountMatrix load_count_matrix(const std::filesystem::path& path) { return count_matrix_from_json(read_text_file(path)); }

}  // namespace lgol
