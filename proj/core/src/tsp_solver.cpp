#include "lgol/tsp_solver.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>

#include "lgol/error.hpp"

namespace lgol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kImprovement = 1e-12;

// All solvers work on a "walk": a node sequence whose first and last
// entries are fixed. A closed tour is the walk start -> ... -> start.
using Walk = std::vector<std::size_t>;

double walk_cost(const Matrix<double>& c, const Walk& w) {
  double sum = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k) sum += c(w[k - 1], w[k]);
  return sum;
}

// Held-Karp over the nodes strictly between `start` and `end`.
Walk held_karp(const Matrix<double>& c, std::size_t start, std::size_t end, const std::vector<std::size_t>& interior) {
  const std::size_t m = interior.size();
  if (m == 0) return {start, end};

  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<double> dp((full + 1) * m, kInf);
  std::vector<std::uint8_t> parent((full + 1) * m, 0);
  auto at = [m](std::size_t mask, std::size_t k) { return mask * m + k; };

  for (std::size_t k = 0; k < m; ++k) dp[at(std::size_t{1} << k, k)] = c(start, interior[k]);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t k = 0; k < m; ++k) {
      if (!(mask & (std::size_t{1} << k))) continue;
      const double base = dp[at(mask, k)];
      if (base == kInf) continue;
      for (std::size_t next = 0; next < m; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t nmask = mask | (std::size_t{1} << next);
        const double cand = base + c(interior[k], interior[next]);
        if (cand < dp[at(nmask, next)]) {
          dp[at(nmask, next)] = cand;
          parent[at(nmask, next)] = static_cast<std::uint8_t>(k);
        }
      }
    }
  }

  std::size_t last = 0;
  double best = kInf;
  for (std::size_t k = 0; k < m; ++k) {
    const double cand = dp[at(full, k)] + c(interior[k], end);
    if (cand < best) {
      best = cand;
      last = k;
    }
  }

  Walk reversed{end};
  std::size_t mask = full;
  std::size_t k = last;
  for (;;) {
    reversed.push_back(interior[k]);
    const std::size_t prev_mask = mask & ~(std::size_t{1} << k);
    if (prev_mask == 0) break;
    k = parent[at(mask, k)];
    mask = prev_mask;
  }
  reversed.push_back(start);
  return {reversed.rbegin(), reversed.rend()};
}

Walk nearest_neighbor_walk(const Matrix<double>& c, std::size_t start, std::size_t end,
                           const std::vector<std::size_t>& interior) {
  Walk w{start};
  std::vector<bool> used(interior.size(), false);
  std::size_t cur = start;
  for (std::size_t step = 0; step < interior.size(); ++step) {
    std::size_t pick = interior.size();
    for (std::size_t k = 0; k < interior.size(); ++k) {
      if (used[k]) continue;
      if (pick == interior.size() || c(cur, interior[k]) < c(cur, interior[pick])) pick = k;
    }
    used[pick] = true;
    cur = interior[pick];
    w.push_back(cur);
  }
  w.push_back(end);
  return w;
}

class LocalSearch {
 public:
  explicit LocalSearch(const Matrix<double>& c) : c_(c) {}

  // Improves `w` in place to a 2-opt / Or-opt local optimum.
  void improve(Walk& w) {
    while (two_opt(w) || or_opt(w)) {
    }
  }

 private:
  void prefix(const Walk& w) {
    fwd_.assign(w.size(), 0.0);
    bwd_.assign(w.size(), 0.0);
    for (std::size_t k = 1; k < w.size(); ++k) {
      fwd_[k] = fwd_[k - 1] + c_(w[k - 1], w[k]);
      bwd_[k] = bwd_[k - 1] + (k + 1 < w.size() ? c_(w[k], w[k - 1]) : 0.0);
    }
  }

  // Reverse w[i..j] for 1 <= i < j <= L-2.
  bool two_opt(Walk& w) {
    const std::size_t len = w.size();
    if (len < 4) return false;
    prefix(w);
    for (std::size_t i = 1; i + 2 < len; ++i) {
      for (std::size_t j = i + 1; j + 1 < len; ++j) {
        const double before = c_(w[i - 1], w[i]) + (fwd_[j] - fwd_[i]) + c_(w[j], w[j + 1]);
        const double after = c_(w[i - 1], w[j]) + (bwd_[j] - bwd_[i]) + c_(w[i], w[j + 1]);
        if (after < before - kImprovement) {
          std::reverse(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          return true;
        }
      }
    }
    return false;
  }

  // Move a segment of 1..3 interior nodes elsewhere, optionally reversed.
  bool or_opt(Walk& w) {
    const std::size_t len = w.size();
    if (len < 4) return false;
    prefix(w);
    for (std::size_t seg = 1; seg <= 3; ++seg) {
      for (std::size_t i = 1; i + seg < len; ++i) {
        const std::size_t j = i + seg - 1;  // last node of the segment
        const double removal = c_(w[i - 1], w[i]) + c_(w[j], w[j + 1]) - c_(w[i - 1], w[j + 1]);
        const double internal_fwd = fwd_[j] - fwd_[i];
        const double internal_bwd = bwd_[j] - bwd_[i];
        for (std::size_t p = 0; p + 1 < len; ++p) {
          if (p + 1 >= i && p <= j) continue;  // edge (p, p+1) touches the segment
          const double base = -c_(w[p], w[p + 1]);
          const double forward = base + c_(w[p], w[i]) + c_(w[j], w[p + 1]);
          const double backward = base + c_(w[p], w[j]) + c_(w[i], w[p + 1]) + internal_bwd - internal_fwd;
          const bool use_backward = seg > 1 && backward < forward;
          const double delta = (use_backward ? backward : forward) - removal;
          if (delta < -kImprovement) {
            move_segment(w, i, j, p, use_backward);
            return true;
          }
        }
      }
    }
    return false;
  }

  static void move_segment(Walk& w, std::size_t i, std::size_t j, std::size_t p, bool reversed) {
    Walk segment(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    if (reversed) std::reverse(segment.begin(), segment.end());
    Walk out;
    out.reserve(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k >= i && k <= j) continue;
      out.push_back(w[k]);
      if (k == p) out.insert(out.end(), segment.begin(), segment.end());
    }
    w = std::move(out);
  }

  const Matrix<double>& c_;
  std::vector<double> fwd_;
  std::vector<double> bwd_;
};

// Random double-bridge on the interior; plain segment reversal when too short.
void perturb(Walk& w, std::mt19937_64& rng) {
  const std::size_t interior = w.size() - 2;
  if (interior < 3) return;
  if (interior < 8) {
    std::uniform_int_distribution<std::size_t> pos(1, w.size() - 2);
    std::size_t a = pos(rng), b = pos(rng);
    if (a > b) std::swap(a, b);
    std::reverse(w.begin() + static_cast<std::ptrdiff_t>(a), w.begin() + static_cast<std::ptrdiff_t>(b) + 1);
    return;
  }
  std::uniform_int_distribution<std::size_t> pos(1, interior - 1);
  std::size_t cuts[3] = {pos(rng), pos(rng), pos(rng)};
  std::sort(std::begin(cuts), std::end(cuts));
  if (cuts[0] == cuts[1] || cuts[1] == cuts[2]) return;
  // Interior blocks A B C D -> A C B D.
  const auto base = w.begin() + 1;
  Walk out{w.front()};
  out.insert(out.end(), base, base + static_cast<std::ptrdiff_t>(cuts[0]));
  out.insert(out.end(), base + static_cast<std::ptrdiff_t>(cuts[1]), base + static_cast<std::ptrdiff_t>(cuts[2]));
  out.insert(out.end(), base + static_cast<std::ptrdiff_t>(cuts[0]), base + static_cast<std::ptrdiff_t>(cuts[1]));
  out.insert(out.end(), base + static_cast<std::ptrdiff_t>(cuts[2]), w.end() - 1);
  out.push_back(w.back());
  w = std::move(out);
}

struct WalkResult {
  Walk walk;
  bool exact = false;
};

WalkResult solve_walk(const Matrix<double>& c, std::size_t start, std::size_t end, std::size_t node_count,
                      const SolverOptions& options) {
  std::vector<std::size_t> interior;
  for (std::size_t v = 0; v < c.size(); ++v) {
    if (v != start && v != end) interior.push_back(v);
  }
  if (node_count <= options.exact_threshold && interior.size() <= 20) return {held_karp(c, start, end, interior), true};

  Walk best = nearest_neighbor_walk(c, start, end, interior);
  LocalSearch ls(c);
  ls.improve(best);
  double best_cost = walk_cost(c, best);

  std::mt19937_64 rng(options.seed);
  for (std::size_t r = 0; r < options.restarts; ++r) {
    Walk cand = best;
    perturb(cand, rng);
    ls.improve(cand);
    const double cost = walk_cost(c, cand);
    if (cost < best_cost - kImprovement) {
      best = std::move(cand);
      best_cost = cost;
    }
  }
  return {std::move(best), false};
}

void check_square(const Matrix<double>& c, std::size_t start) {
  if (!c.square() || c.size() == 0) throw Error(ErrorCode::PreconditionFailed, "cost matrix must be square and non-empty");
  if (start >= c.size()) throw Error(ErrorCode::PreconditionFailed, "anchor outside the cost matrix");
}

}  // namespace

std::string_view to_string(SolveMethod m) { return m == SolveMethod::Exact ? "exact" : "local_search"; }

double tour_cost(const Matrix<double>& cost, const std::vector<std::size_t>& order) {
  if (order.size() < 2) return 0.0;
  return path_cost(cost, order) + cost(order.back(), order.front());
}

double path_cost(const Matrix<double>& cost, const std::vector<std::size_t>& order) {
  double sum = 0.0;
  for (std::size_t k = 1; k < order.size(); ++k) sum += cost(order[k - 1], order[k]);
  return sum;
}

SolveReport solve_tour(const TourInstance& instance, const SolverOptions& options) {
  check_square(instance.cost, instance.start);
  const std::size_t n = instance.cost.size();
  SolveReport report;
  report.seed = options.seed;
  if (n == 1) {
    report.order = {instance.start};
    report.optimal = true;
    return report;
  }
  auto result = solve_walk(instance.cost, instance.start, instance.start, n, options);
  result.walk.pop_back();
  report.order = std::move(result.walk);
  report.objective = tour_cost(instance.cost, report.order);
  report.optimal = result.exact;
  report.method = result.exact ? SolveMethod::Exact : SolveMethod::LocalSearch;
  return report;
}

SolveReport solve_path(const PathInstance& instance, const SolverOptions& options) {
  check_square(instance.cost, instance.start);
  const std::size_t n = instance.cost.size();
  if (instance.end && *instance.end >= n) throw Error(ErrorCode::PreconditionFailed, "end anchor outside the cost matrix");
  if (instance.end && *instance.end == instance.start && n > 1)
    throw Error(ErrorCode::InfeasibleAnchors, "path start and end coincide");

  SolveReport report;
  report.seed = options.seed;
  if (n == 1) {
    report.order = {instance.start};
    report.optimal = true;
    return report;
  }

  WalkResult result;
  if (instance.end) {
    result = solve_walk(instance.cost, instance.start, *instance.end, n, options);
  } else {
    // Virtual terminal: free to enter from anywhere, never left.
    Matrix<double> augmented(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) augmented(i, j) = instance.cost(i, j);
      augmented(n, i) = kInf;
    }
    result = solve_walk(augmented, instance.start, n, n, options);
    result.walk.pop_back();
  }
  report.order = std::move(result.walk);
  report.objective = path_cost(instance.cost, report.order);
  report.optimal = result.exact;
  report.method = result.exact ? SolveMethod::Exact : SolveMethod::LocalSearch;
  return report;
}

namespace detail {

std::vector<std::size_t> nearest_neighbor_path(const Matrix<double>& cost, std::size_t start,
                                               std::optional<std::size_t> end) {
  std::vector<std::size_t> interior;
  for (std::size_t v = 0; v < cost.size(); ++v) {
    if (v != start && (!end || v != *end)) interior.push_back(v);
  }
  Walk w = nearest_neighbor_walk(cost, start, end.value_or(start), interior);
  if (!end || cost.size() == 1) w.pop_back();
  return w;
}

}  // namespace detail

}  // namespace lgol
