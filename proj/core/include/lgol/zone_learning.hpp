#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgol/domain.hpp"
#include "lgol/ingestion.hpp"
#include "lgol/matrix.hpp"

namespace lgol {

struct RunLengthPair {
  ZoneId zone;
  std::size_t count = 1;

  bool operator==(const RunLengthPair&) const = default;
};

struct ZoneSequence {
  StationId station;
  std::vector<ZoneId> zones;

  bool operator==(const ZoneSequence&) const = default;
};

std::vector<RunLengthPair> run_length_encode(std::span<const ZoneId> zones);

// Reduces a stop-level zone list to an order of distinct zones. Repeated
// zones keep only their longest run (earliest run on ties); the zone with
// the most runs is resolved first, then newly adjacent runs are merged.
ZoneSequence to_zone_sequence(std::span<const ZoneId> stop_zones);

// Zone sequence of a route's realized (or any given) stop order.
ZoneSequence zone_sequence_of(const Route& route, std::span<const StopIndex> seq);

// Per-station transition tallies. Index 0 is the station; zones follow in
// sorted order.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(StationId station, std::vector<ZoneId> zones);
  // `counts` must already be laid out in the sorted index of `zones`.
  static CountMatrix from_raw(StationId station, std::vector<ZoneId> zones, Matrix<std::uint64_t> counts);

  const StationId& station() const noexcept { return station_; }
  const std::vector<ZoneId>& zones() const noexcept { return zones_; }
  std::size_t dimension() const noexcept { return zones_.size() + 1; }
  const Matrix<std::uint64_t>& counts() const noexcept { return counts_; }

  // Node index of a zone (station is 0), or nullopt for an unseen zone.
  std::optional<std::size_t> index_of(const ZoneId& zone) const;
  std::uint64_t at(std::size_t from, std::size_t to) const { return counts_(from, to); }
  std::uint64_t total() const;

  void add_sequence(const ZoneSequence& seq);
  // Adds `other` into this matrix; the zone index becomes the union.
  void merge(const CountMatrix& other);

  bool operator==(const CountMatrix&) const = default;

 private:
  StationId station_;
  std::vector<ZoneId> zones_;
  Matrix<std::uint64_t> counts_;
};

// Tallies station->first zone, zone->zone and last zone->station
// transitions over the realized sequences of one station's routes.
CountMatrix accumulate_counts(const Corpus& station_corpus, const StationId& station);

// One CountMatrix per station of the corpus.
std::vector<CountMatrix> learn_counts(const Corpus& corpus);

std::string count_matrix_to_json(const CountMatrix& m);
CountMatrix count_matrix_from_json(const std::string& text);
void save_count_matrix(const CountMatrix& m, const std::filesystem::path& path);
CountMatrix load_count_matrix(const std::filesystem::path& path);

}  // namespace lgol
