#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lgol/domain.hpp"

namespace lgol {

// A route that could not be loaded, with enough context to find it again.
struct Rejection {
  std::string file;
  std::string route_id;
  std::string field_path;
  std::string reason;
};

struct Corpus {
  std::vector<Route> routes;
  std::set<StationId> stations;
  std::vector<Rejection> rejections;

  bool empty() const noexcept { return routes.empty(); }
  std::size_t size() const noexcept { return routes.size(); }
  // Routes of one station, in corpus order.
  Corpus for_station(const StationId& station) const;
  void add(Route route);

  bool operator==(const Corpus& other) const { return routes == other.routes && stations == other.stations; }
};

struct TrainTestSplit {
  Corpus train;
  Corpus test;
  std::uint64_t seed = 0;
};

// File names of the challenge-style layout inside a corpus directory.
struct CorpusPaths {
  std::filesystem::path route_data;
  std::filesystem::path sequences;
  std::filesystem::path travel_times;

  static CorpusPaths in_directory(const std::filesystem::path& dir);
};

// Reads the three challenge JSON files. `sequence_path` may be empty or
// missing, in which case routes carry no actual sequence. Routes that fail
// to parse or validate land in Corpus::rejections.
Corpus load_corpus(const std::filesystem::path& route_data_path, const std::filesystem::path& sequence_path,
                   const std::filesystem::path& travel_time_path);
Corpus load_corpus(const CorpusPaths& paths);

// Imputes missing zones route by route; routes without any zoned stop move
// to the rejections.
Corpus impute_corpus(Corpus corpus);

// Writes the same three files `load_corpus` reads (keys sorted).
void write_corpus(const Corpus& corpus, const CorpusPaths& paths);

// Stratified by station: each station contributes round(test_fraction * n)
// routes to the test side.
TrainTestSplit split_corpus(const Corpus& corpus, double test_fraction, std::uint64_t seed);

// route_id -> visit order as stop indices of that route.
using PredictionMap = std::map<std::string, Sequence>;

// Writes {"route": {"proposed": {"stop": order, ...}}, ...}. Every sequence
// is checked before anything is written.
void write_predictions(const PredictionMap& predictions, const Corpus& corpus, const std::filesystem::path& path);

// Reads the prediction file back, resolving stop ids against `corpus`.
PredictionMap read_predictions(const std::filesystem::path& path, const Corpus& corpus);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lgol
