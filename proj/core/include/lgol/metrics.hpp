#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgol/domain.hpp"
#include "lgol/zone_learning.hpp"

namespace lgol {

// Positional displacement between two orders of the same n + 1 labels
// sharing their first element:
//   2 / (n (n - 1)) * sum_{i=1..n} (|a_i - a_{i-1}| - 1)
// where a_i is the position in `actual` of predicted[i]. Returns 0 for
// n < 2 and sets *too_short when given.
double sequence_deviation(std::span<const std::size_t> actual, std::span<const std::size_t> predicted,
                          bool* too_short = nullptr);

// Sequence deviation between two zone orders, with the station prepended
// to both as the shared first element.
double zone_sequence_deviation(const ZoneSequence& actual, const ZoneSequence& predicted, bool* too_short = nullptr);

// Minimum insertions plus deletions turning `predicted` into `actual`:
// 2 * (len - LCS).
std::size_t erp_edit(std::span<const std::size_t> actual, std::span<const std::size_t> predicted);

// Positionwise sum of standardized, min-shifted travel times between
// actual[i] and predicted[i]. Mean and population standard deviation run
// over every ordered stop pair of the matrix, diagonal included. A constant
// matrix yields 0 and sets *zero_variance when given.
double erp_norm(std::span<const std::size_t> actual, std::span<const std::size_t> predicted,
                const Matrix<double>& travel_times, bool* zero_variance = nullptr);

struct EvaluationReport {
  std::string route_id;
  double sd_stop = 0.0;
  double sd_zone = 0.0;
  std::size_t erp_edit = 0;
  double erp_norm = 0.0;
  // Undefined when erp_edit == 0.
  std::optional<double> erp_ratio;
  double route_score = 0.0;
  // Realized travel time of the predicted order, without the return leg.
  double travel_time_seconds = 0.0;
  bool too_short = false;
  bool zero_variance = false;
};

// All metrics of one prediction against the route's actual sequence.
EvaluationReport route_score(const Route& route, std::span<const StopIndex> actual,
                             std::span<const StopIndex> predicted);

struct CorpusScore {
  double performance = 0.0;
  std::vector<EvaluationReport> per_route;

  // Column means for a benchmark table; erp_ratio averages defined values only.
  double mean_sd_zone() const;
  double mean_sd_stop() const;
  double mean_erp_ratio() const;
  double mean_travel_time() const;
};

CorpusScore corpus_performance(std::vector<EvaluationReport> reports);

std::string reports_to_csv(const CorpusScore& score);
std::string reports_to_json(const CorpusScore& score);

}  // namespace lgol
