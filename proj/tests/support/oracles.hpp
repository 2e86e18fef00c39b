#pragma once

// Deliberately naive reimplementations used as references. None of them
// share code with the library.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <vector>

#include "lgol/matrix.hpp"

namespace lgol::oracle {

struct Best {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order;
};

// Every tour that starts at `start`; the objective includes the return edge.
inline Best brute_tour(const Matrix<double>& c, std::size_t start) {
  const std::size_t n = c.rows();
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (i != start) rest.push_back(i);
  Best best;
  do {
    double total = 0.0;
    std::size_t at = start;
    for (std::size_t v : rest) {
      total += c(at, v);
      at = v;
    }
    total += c(at, start);
    if (total < best.cost) {
      best.cost = total;
      best.order = {start};
      best.order.insert(best.order.end(), rest.begin(), rest.end());
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

// Every Hamiltonian path from `start`, ending at `end` when given.
inline Best brute_path(const Matrix<double>& c, std::size_t start, std::optional<std::size_t> end) {
  const std::size_t n = c.rows();
  std::vector<std::size_t> mid;
  for (std::size_t i = 0; i < n; ++i)
    if (i != start && (!end || i != *end)) mid.push_back(i);
  Best best;
  do {
    std::vector<std::size_t> order{start};
    order.insert(order.end(), mid.begin(), mid.end());
    if (end) order.push_back(*end);
    double total = 0.0;
    for (std::size_t k = 1; k < order.size(); ++k) total += c(order[k - 1], order[k]);
    if (total < best.cost) {
      best.cost = total;
      best.order = order;
    }
  } while (std::next_permutation(mid.begin(), mid.end()));
  return best;
}

inline double path_sum(const Matrix<double>& c, const std::vector<std::size_t>& order) {
  double total = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) total += c(order[k - 1], order[k]);
  return total;
}

// Positional deviation straight from its definition, with a linear search
// for every position.
inline double sequence_deviation(const std::vector<std::size_t>& actual, const std::vector<std::size_t>& predicted) {
  const std::size_t n = actual.size() - 1;
  if (n < 2) return 0.0;
  std::vector<long> a;
  for (std::size_t x : predicted) a.push_back(std::find(actual.begin(), actual.end(), x) - actual.begin());
  long s = 0;
  for (std::size_t i = 1; i <= n; ++i) s += std::labs(a[i] - a[i - 1]) - 1;
  return 2.0 * static_cast<double>(s) / static_cast<double>(n * (n - 1));
}

// Insert/delete edit distance by the textbook edit-distance table (no
// substitutions), not via LCS.
inline std::size_t indel_distance(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min(d[i - 1][j], d[i][j - 1]) + 1;
      if (a[i - 1] == b[j - 1]) d[i][j] = std::min(d[i][j], d[i - 1][j - 1]);
    }
  return d[a.size()][b.size()];
}

// Standardized, min-shifted travel time summed position by position. Two
// explicit passes in long double.
inline double erp_norm(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, const Matrix<double>& t) {
  const std::size_t n = t.rows();
  long double sum = 0.0L;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sum += t(i, j);
  const long double mean = sum / static_cast<long double>(n * n);
  long double ss = 0.0L;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ss += (t(i, j) - mean) * (t(i, j) - mean);
  const long double sd = std::sqrt(ss / static_cast<long double>(n * n));
  if (sd == 0.0L) return 0.0;
  long double lo = std::numeric_limits<long double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lo = std::min(lo, (t(i, j) - mean) / sd);
  long double total = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k) total += (t(a[k], b[k]) - mean) / sd - lo;
  return static_cast<double>(total);
}

}  // namespace lgol::oracle
