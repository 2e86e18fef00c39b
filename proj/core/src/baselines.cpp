#include "lgol/baselines.hpp"

#include <algorithm>

#include "lgol/zone_learning.hpp"

namespace lgol {

namespace {

PredictedSequence finish(const Route& route, Sequence order) {
  PredictedSequence out;
  out.route_id = route.route_id;
  out.stop_order = std::move(order);
  out.zone_order = zone_sequence_of(route, out.stop_order);
  return out;
}

bool lexicographically_smaller(const Route& route, const Sequence& a, const Sequence& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [&route](StopIndex x, StopIndex y) {
    return route.stops[x].id < route.stops[y].id;
  });
}

}  // namespace

PredictedSequence nearest_neighbor(const Route& route) {
  const StopIndex station = route.station_index();
  std::vector<bool> visited(route.size(), false);
  visited[station] = true;
  Sequence order{station};
  for (std::size_t step = 1; step < route.size(); ++step) {
    const StopIndex cur = order.back();
    StopIndex pick = route.size();
    for (StopIndex v = 0; v < route.size(); ++v) {
      if (visited[v]) continue;
      if (pick == route.size()) {
        pick = v;
        continue;
      }
      const double t = route.travel_time(cur, v);
      const double best = route.travel_time(cur, pick);
      if (t < best || (t == best && route.stops[v].id < route.stops[pick].id)) pick = v;
    }
    visited[pick] = true;
    order.push_back(pick);
  }
  return finish(route, std::move(order));
}

PredictedSequence full_tsp(const Route& route, const SolverOptions& options) {
  const StopIndex station = route.station_index();
  SolveReport report = solve_tour({route.travel_times, station}, options);

  Sequence forward(report.order.begin(), report.order.end());
  Sequence backward{forward.front()};
  backward.insert(backward.end(), forward.rbegin(), forward.rend() - 1);
  const double fwd_cost = tour_cost(route.travel_times, forward);
  const double bwd_cost = tour_cost(route.travel_times, backward);
  const bool use_backward =
      bwd_cost < fwd_cost || (bwd_cost == fwd_cost && lexicographically_smaller(route, backward, forward));

  PredictedSequence out = finish(route, use_backward ? std::move(backward) : std::move(forward));
  if (use_backward) {
    report.order = out.stop_order;
    report.objective = bwd_cost;
  }
  out.global_report = std::move(report);
  return out;
}

}  // namespace lgol
