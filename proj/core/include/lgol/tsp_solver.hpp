#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lgol/matrix.hpp"

namespace lgol {

// Closed tour through every node, anchored at `start`.
struct TourInstance {
  Matrix<double> cost;
  std::size_t start = 0;
};

// Hamiltonian path from `start`, optionally ending at `end`.
struct PathInstance {
  Matrix<double> cost;
  std::size_t start = 0;
  std::optional<std::size_t> end;
};

enum class SolveMethod { Exact, LocalSearch };

std::string_view to_string(SolveMethod m);

struct SolveReport {
  // Node order; tours start at the anchor and do not repeat it at the end.
  std::vector<std::size_t> order;
  double objective = 0.0;
  bool optimal = false;
  SolveMethod method = SolveMethod::Exact;
  std::uint64_t seed = 0;
};

struct SolverOptions {
  // Instances with at most this many nodes are solved exactly by subset DP.
  std::size_t exact_threshold = 16;
  std::uint64_t seed = 0x5eed;
  // Perturbation rounds (double bridge + local search) after the first local optimum.
  std::size_t restarts = 8;
};

SolveReport solve_tour(const TourInstance& instance, const SolverOptions& options = {});
SolveReport solve_path(const PathInstance& instance, const SolverOptions& options = {});

double tour_cost(const Matrix<double>& cost, const std::vector<std::size_t>& order);
double path_cost(const Matrix<double>& cost, const std::vector<std::size_t>& order);

namespace detail {

// Exposed for tests and benchmarks.
std::vector<std::size_t> nearest_neighbor_path(const Matrix<double>& cost, std::size_t start,
                                               std::optional<std::size_t> end);

}  // namespace detail

}  // namespace lgol
