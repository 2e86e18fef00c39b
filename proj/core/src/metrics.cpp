#include "lgol/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lgol/error.hpp"

namespace lgol {

namespace {

// Position of each label of `actual`; throws unless `predicted` is a
// reordering of `actual` with the same first element.
std::map<std::size_t, std::size_t> positions(std::span<const std::size_t> actual,
                                             std::span<const std::size_t> predicted) {
  if (actual.size() != predicted.size())
    throw Error(ErrorCode::NotPermutation, "sequences differ in length");
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!pos.emplace(actual[i], i).second) throw Error(ErrorCode::NotPermutation, "repeated element in actual");
  }
  std::vector<bool> seen(actual.size(), false);
  for (std::size_t x : predicted) {
    const auto it = pos.find(x);
    if (it == pos.end() || seen[it->second]) throw Error(ErrorCode::NotPermutation, "predicted is not a permutation");
    seen[it->second] = true;
  }
  return pos;
}

double mean_of(const std::vector<EvaluationReport>& reports, double EvaluationReport::*field) {
  if (reports.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : reports) sum += r.*field;
  return sum / static_cast<double>(reports.size());
}

}  // namespace

double sequence_deviation(std::span<const std::size_t> actual, std::span<const std::size_t> predicted,
                          bool* too_short) {
  const auto pos = positions(actual, predicted);
  if (!actual.empty() && actual.front() != predicted.front())
    throw Error(ErrorCode::NotPermutation, "sequences must share their first element");
  const std::size_t n = actual.empty() ? 0 : actual.size() - 1;
  if (too_short) *too_short = n < 2;
  if (n < 2) return 0.0;

  double sum = 0.0;
  long long prev = static_cast<long long>(pos.at(predicted[0]));
  for (std::size_t i = 1; i <= n; ++i) {
    const long long cur = static_cast<long long>(pos.at(predicted[i]));
    sum += static_cast<double>(std::llabs(cur - prev) - 1);
    prev = cur;
  }
  return 2.0 / (static_cast<double>(n) * static_cast<double>(n - 1)) * sum;
}

double zone_sequence_deviation(const ZoneSequence& actual, const ZoneSequence& predicted, bool* too_short) {
  std::map<ZoneId, std::size_t> label;
  std::vector<std::size_t> a{0}, b{0};
  for (const auto& z : actual.zones) {
    label.emplace(z, label.size() + 1);
    a.push_back(label.at(z));
  }
  for (const auto& z : predicted.zones) {
    const auto it = label.find(z);
    if (it == label.end()) throw Error(ErrorCode::NotPermutation, "zone " + z.value + " missing from actual");
    b.push_back(it->second);
  }
  return sequence_deviation(a, b, too_short);
}

std::size_t erp_edit(std::span<const std::size_t> actual, std::span<const std::size_t> predicted) {
  positions(actual, predicted);
  const std::size_t n = actual.size();
  std::vector<std::size_t> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j)
      cur[j] = actual[i - 1] == predicted[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return 2 * (n - prev[n]);
}

double erp_norm(std::span<const std::size_t> actual, std::span<const std::size_t> predicted,
                const Matrix<double>& travel_times, bool* zero_variance) {
  if (actual.size() != predicted.size()) throw Error(ErrorCode::NotPermutation, "sequences differ in length");
  const auto& t = travel_times.data();
  if (t.empty() || !travel_times.square())
    throw Error(ErrorCode::PreconditionFailed, "travel-time matrix must be square and non-empty");
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] >= travel_times.size() || predicted[i] >= travel_times.size())
      throw Error(ErrorCode::PreconditionFailed, "stop outside the travel-time matrix");
  }

  const double count = static_cast<double>(t.size());
  const double mean = std::accumulate(t.begin(), t.end(), 0.0) / count;
  double var = 0.0;
  for (double v : t) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / count);
  if (zero_variance) *zero_variance = !(sd > 0.0);
  if (!(sd > 0.0)) return 0.0;

  auto y = [&](double v) { return (v - mean) / sd; };
  double min_y = std::numeric_limits<double>::infinity();
  for (double v : t) min_y = std::min(min_y, y(v));

  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) sum += y(travel_times(actual[i], predicted[i])) - min_y;
  return sum;
}

EvaluationReport route_score(const Route& route, std::span<const StopIndex> actual,
                             std::span<const StopIndex> predicted) {
  EvaluationReport r;
  r.route_id = route.route_id.value;
  r.sd_stop = sequence_deviation(actual, predicted, &r.too_short);
  const auto actual_zones = zone_sequence_of(route, actual);
  const auto predicted_zones = zone_sequence_of(route, predicted);
  r.sd_zone = zone_sequence_deviation(actual_zones, predicted_zones);
  r.erp_edit = erp_edit(actual, predicted);
  r.erp_norm = erp_norm(actual, predicted, route.travel_times, &r.zero_variance);
  if (r.erp_edit > 0) {
    r.erp_ratio = r.erp_norm / static_cast<double>(r.erp_edit);
    r.route_score = r.sd_stop * r.erp_norm / static_cast<double>(r.erp_edit);
  }
  r.travel_time_seconds = open_travel_time(route, predicted);
  return r;
}

double CorpusScore::mean_sd_zone() const { return mean_of(per_route, &EvaluationReport::sd_zone); }
double CorpusScore::mean_sd_stop() const { return mean_of(per_route, &EvaluationReport::sd_stop); }
double CorpusScore::mean_travel_time() const { return mean_of(per_route, &EvaluationReport::travel_time_seconds); }

double CorpusScore::mean_erp_ratio() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : per_route) {
    if (r.erp_ratio) {
      sum += *r.erp_ratio;
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

CorpusScore corpus_performance(std::vector<EvaluationReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::EmptyInput, "no route reports to average");
  CorpusScore score;
  score.per_route = std::move(reports);
  score.performance = mean_of(score.per_route, &EvaluationReport::route_score);
  return score;
}

std::string reports_to_csv(const CorpusScore& score) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "route_id,sd_zone,sd_stop,erp_edit,erp_norm,erp_ratio,time_s,route_score\n";
  for (const auto& r : score.per_route) {
    out << r.route_id << ',' << r.sd_zone << ',' << r.sd_stop << ',' << r.erp_edit << ',' << r.erp_norm << ',';
    if (r.erp_ratio) out << *r.erp_ratio;
    out << ',' << r.travel_time_seconds << ',' << r.route_score << '\n';
  }
  return out.str();
}

std::string reports_to_json(const CorpusScore& score) {
  nlohmann::json routes = nlohmann::json::array();
  for (const auto& r : score.per_route) {
    routes.push_back({{"route_id", r.route_id},
                      {"sd_zone", r.sd_zone},
                      {"sd_stop", r.sd_stop},
                      {"erp_edit", r.erp_edit},
                      {"erp_norm", r.erp_norm},
                      {"erp_ratio", r.erp_ratio ? nlohmann::json(*r.erp_ratio) : nlohmann::json(nullptr)},
                      {"time_s", r.travel_time_seconds},
                      {"route_score", r.route_score},
                      {"too_short", r.too_short},
                      {"zero_variance", r.zero_variance}});
  }
  nlohmann::json doc = {{"performance", score.performance},
                        {"sd_zone", score.mean_sd_zone()},
                        {"sd_stop", score.mean_sd_stop()},
                        {"erp_ratio", score.mean_erp_ratio()},
                        {"time_s", score.mean_travel_time()},
                        {"routes", std::move(routes)}};
  return doc.dump(2);
}

}  // namespace lgol
