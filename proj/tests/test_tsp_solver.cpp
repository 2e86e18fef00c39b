#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "lgol/error.hpp"
#include "lgol/tsp_solver.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace lgol;
using namespace lgol::testing;

namespace {

bool is_perm(const std::vector<std::size_t>& order, std::size_t n) {
  std::vector<std::size_t> s = order;
  std::sort(s.begin(), s.end());
  for (std::size_t k = 0; k < s.size(); ++k)
    if (s[k] != k) return false;
  return s.size() == n;
}

SolverOptions local_only() {
  SolverOptions o;
  o.exact_threshold = 1;
  return o;
}

}  // namespace

TEST(SolveTour, SquareIsTraversedAroundTheRim) {
  // Unit square, corners 0..3 in order; diagonals cost sqrt(2).
  Matrix<double> c(4, 1.0);
  for (std::size_t i = 0; i < 4; ++i) c(i, i) = 0.0;
  c(0, 2) = c(2, 0) = c(1, 3) = c(3, 1) = std::sqrt(2.0);
  const auto r = solve_tour({c, 0});
  EXPECT_DOUBLE_EQ(r.objective, 4.0);
  EXPECT_TRUE(r.optimal);
  EXPECT_EQ(r.method, SolveMethod::Exact);
  EXPECT_EQ(r.order.front(), 0u);
  EXPECT_TRUE(r.order == (std::vector<std::size_t>{0, 1, 2, 3}) || r.order == (std::vector<std::size_t>{0, 3, 2, 1}));
}

TEST(SolveTour, TrivialSizes) {
  const auto one = solve_tour({Matrix<double>(1, 0.0), 0});
  EXPECT_EQ(one.order, (std::vector<std::size_t>{0}));
  EXPECT_EQ(one.objective, 0.0);

  Matrix<double> c(2, 0.0);
  c(0, 1) = 3;
  c(1, 0) = 4;
  const auto two = solve_tour({c, 1});
  EXPECT_EQ(two.order, (std::vector<std::size_t>{1, 0}));
  EXPECT_DOUBLE_EQ(two.objective, 7.0);
}

TEST(SolvePath, AsymmetricFixedEnds) {
  Matrix<double> c(3, 0.0);
  c(0, 1) = 1;
  c(1, 2) = 1;
  c(0, 2) = 10;
  c(2, 1) = 10;
  c(1, 0) = 10;
  c(2, 0) = 10;
  const auto r = solve_path({c, 0, 2});
  EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(r.objective, 2.0);
}

TEST(SolvePath, FreeEndPicksTheCheapestTerminal) {
  Matrix<double> c(3, 5.0);
  for (std::size_t i = 0; i < 3; ++i) c(i, i) = 0.0;
  c(0, 2) = 1;
  c(2, 1) = 1;
  const auto r = solve_path({c, 0, std::nullopt});
  EXPECT_EQ(r.order, (std::vector<std::size_t>{0, 2, 1}));
  EXPECT_DOUBLE_EQ(r.objective, 2.0);
}

TEST(SolvePath, InvalidAnchors) {
  try {
    solve_path({Matrix<double>(3, 1.0), 1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleAnchors);
  }
  EXPECT_THROW(solve_path({Matrix<double>(3, 1.0), 0, 7}), Error);
  EXPECT_THROW(solve_tour({Matrix<double>(3, 1.0), 3}), Error);
  EXPECT_THROW(solve_tour({Matrix<double>(2, 3, 1.0), 0}), Error);
}

TEST(SolverProperty, ExactMatchesBruteForce) {
  Rng rng(123);
  for (int trial = 0; trial < 240; ++trial) {
    const std::size_t n = uniform_index(rng, 2, 9);
    const bool symmetric = trial % 3 == 0;
    const Matrix<double> c = random_cost(rng, n, symmetric);
    const std::size_t start = uniform_index(rng, 0, n - 1);

    switch (trial % 3) {
      case 0: {
        const auto got = solve_tour({c, start});
        EXPECT_NEAR(got.objective, oracle::brute_tour(c, start).cost, 1e-9);
        EXPECT_TRUE(is_perm(got.order, n));
        EXPECT_EQ(got.order.front(), start);
        EXPECT_NEAR(got.objective, tour_cost(c, got.order), 1e-9);
        break;
      }
      case 1: {
        std::size_t end = uniform_index(rng, 0, n - 2);
        if (end >= start) ++end;
        const auto got = solve_path({c, start, end});
        EXPECT_NEAR(got.objective, oracle::brute_path(c, start, end).cost, 1e-9);
        EXPECT_EQ(got.order.front(), start);
        EXPECT_EQ(got.order.back(), end);
        EXPECT_TRUE(is_perm(got.order, n));
        EXPECT_NEAR(got.objective, oracle::path_sum(c, got.order), 1e-9);
        break;
      }
      default: {
        const auto got = solve_path({c, start, std::nullopt});
        EXPECT_NEAR(got.objective, oracle::brute_path(c, start, std::nullopt).cost, 1e-9);
        EXPECT_EQ(got.order.front(), start);
        EXPECT_TRUE(is_perm(got.order, n));
        break;
      }
    }
  }
}

TEST(SolverProperty, LocalSearchNeverWorseThanNearestNeighbor) {
  Rng rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = uniform_index(rng, 3, 30);
    const Matrix<double> c = random_cost(rng, n, trial % 2 == 0);
    const bool free_end = trial % 3 == 0;
    const std::optional<std::size_t> end = free_end ? std::nullopt : std::optional<std::size_t>(n - 1);
    const auto nn = detail::nearest_neighbor_path(c, 0, end);
    const auto ls = solve_path({c, 0, end}, local_only());
    EXPECT_EQ(ls.method, SolveMethod::LocalSearch);
    EXPECT_FALSE(ls.optimal);
    EXPECT_TRUE(is_perm(ls.order, n));
    EXPECT_LE(ls.objective, oracle::path_sum(c, nn) + 1e-9);
    EXPECT_NEAR(ls.objective, oracle::path_sum(c, ls.order), 1e-9);
    if (n <= 8) EXPECT_GE(ls.objective, oracle::brute_path(c, 0, end).cost - 1e-9);
  }
}

TEST(SolverProperty, LocalSearchTourHitsKnownOptimumOnConvexPolygon) {
  // Points on a circle: the optimal tour is the polygon, whatever the labels.
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = uniform_index(rng, 20, 60);
    std::vector<std::size_t> label(n);
    std::iota(label.begin(), label.end(), 0);
    std::shuffle(label.begin(), label.end(), rng);
    std::vector<std::pair<double, double>> p(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double a = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
      p[label[k]] = {std::cos(a), std::sin(a)};
    }
    Matrix<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c(i, j) = std::hypot(p[i].first - p[j].first, p[i].second - p[j].second);
    const double perimeter = static_cast<double>(n) * 2.0 * std::sin(M_PI / static_cast<double>(n));
    const auto r = solve_tour({c, label[0]}, local_only());
    EXPECT_NEAR(r.objective, perimeter, 1e-9) << "n=" << n;
  }
}

TEST(SolverProperty, DeterministicForFixedSeed) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix<double> c = random_cost(rng, 40);
    SolverOptions o = local_only();
    o.seed = trial;
    const auto a = solve_tour({c, 0}, o);
    const auto b = solve_tour({c, 0}, o);
    EXPECT_EQ(a.order, b.order);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.seed, o.seed);
  }
}

TEST(NearestNeighbor, GreedyChainFromStart) {
  Matrix<double> c(4, 9.0);
  for (std::size_t i = 0; i < 4; ++i) c(i, i) = 0.0;
  c(0, 3) = 1;
  c(3, 1) = 1;
  EXPECT_EQ(detail::nearest_neighbor_path(c, 0, std::nullopt), (std::vector<std::size_t>{0, 3, 1, 2}));
  // With the end pinned, 3 is held back for last.
  EXPECT_EQ(detail::nearest_neighbor_path(c, 0, 3).back(), 3u);
}
