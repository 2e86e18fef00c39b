#pragma once

#include "lgol/domain.hpp"
#include "lgol/predictor.hpp"
#include "lgol/tsp_solver.hpp"

namespace lgol {

// Greedy chain from the station: always the nearest unvisited stop by
// travel time, ties to the smaller StopId.
PredictedSequence nearest_neighbor(const Route& route);

// Closed travel-time tour over every stop, cut at the station and read in
// the direction of lower directed tour cost (ties: lexicographically
// smaller stop-id sequence).
PredictedSequence full_tsp(const Route& route, const SolverOptions& options = {});

}  // namespace lgol
