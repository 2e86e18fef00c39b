#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "lgol/error.hpp"
#include "lgol/predictor.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace lgol;
using namespace lgol::testing;

namespace {

std::vector<ZoneId> zs(std::initializer_list<const char*> names) {
  std::vector<ZoneId> out;
  for (const char* n : names) out.push_back(zone(n));
  return out;
}

TransitionMatrix trained_on(const std::vector<std::vector<std::string>>& orders, const std::vector<ZoneId>& zones) {
  CountMatrix m(StationId{"S"}, zones);
  for (const auto& o : orders) {
    ZoneSequence s{StationId{"S"}, {}};
    for (const auto& z : o) s.zones.push_back(zone(z));
    m.add_sequence(s);
  }
  return to_transition_matrix(m);
}

Matrix<double> travel_among(const Route& r, const std::vector<StopIndex>& nodes) {
  Matrix<double> c(nodes.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (i != j) c(i, j) = r.travel_times(nodes[i], nodes[j]);
  return c;
}

// Zone entry stop: nearest to the plain average of the member coordinates,
// recomputed here with a direct scan.
StopIndex entry_oracle(const Route& r, const ZoneId& z) {
  double lat = 0, lng = 0;
  std::vector<StopIndex> members;
  for (StopIndex i = 0; i < r.size(); ++i)
    if (r.stops[i].zone == z) members.push_back(i);
  for (StopIndex i : members) {
    lat += r.stops[i].location.lat;
    lng += r.stops[i].location.lng;
  }
  const GeoPoint c{lat / members.size(), lng / members.size()};
  StopIndex best = members[0];
  for (StopIndex i : members) {
    const double d = planar_distance(r.stops[i].location, c, r.reference_lat());
    const double b = planar_distance(r.stops[best].location, c, r.reference_lat());
    if (d < b || (d == b && r.stops[i].id < r.stops[best].id)) best = i;
  }
  return best;
}

// Chains brute-force paths zone by zone: previous stop -> zone members -> next entry.
Sequence stop_sequence_oracle(const Route& r, const std::vector<ZoneId>& order) {
  Sequence out{r.station_index()};
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::vector<StopIndex> nodes{out.back()};
    for (StopIndex i = 0; i < r.size(); ++i)
      if (r.stops[i].zone == order[k]) nodes.push_back(i);
    nodes.push_back(k + 1 < order.size() ? entry_oracle(r, order[k + 1]) : r.station_index());
    const auto best = oracle::brute_path(travel_among(r, nodes), 0, nodes.size() - 1);
    for (std::size_t p = 1; p + 1 < best.order.size(); ++p) out.push_back(nodes[best.order[p]]);
  }
  return out;
}

}  // namespace

TEST(Predict, SingleZoneIsAClosedTourFromTheStation) {
  const Route r = route_from_stops({station_stop("stn", {0, 0}), zoned_stop("a", {0.01, 0}, "A"),
                                    zoned_stop("b", {0.01, 0.01}, "A"), zoned_stop("c", {0, 0.01}, "A")});
  const auto p = predict(r, empty_model(StationId{"S"}), WeightConfig::scalar(0.5));
  EXPECT_EQ(p.zone_order.zones, zs({"A"}));
  ASSERT_EQ(p.local_reports.size(), 1u);
  EXPECT_NEAR(p.local_reports[0].objective, oracle::brute_tour(r.travel_times, 0).cost, 1e-9);
  EXPECT_TRUE(p.stop_order == (Sequence{0, 1, 2, 3}) || p.stop_order == (Sequence{0, 3, 2, 1}));
}

TEST(Predict, PureHistoryFollowsTheLearnedOrder) {
  // B sits next to the station and A far away, so geometry alone says B first.
  const Route r = route_from_stops({station_stop("stn", {0, 0}), zoned_stop("a", {0.05, 0.05}, "A"),
                                    zoned_stop("b", {0.001, 0}, "B")});
  const auto model = trained_on({{"A", "B"}}, zs({"A", "B"}));
  EXPECT_EQ(predict_zone_sequence(r, model, WeightConfig::scalar(0.0)).zones, zs({"A", "B"}));
  const auto p = predict(r, model, WeightConfig::scalar(0.0));
  EXPECT_EQ(p.stop_order, (Sequence{0, 1, 2}));
  ASSERT_TRUE(p.global_report.has_value());
  EXPECT_NEAR(p.global_report->objective, 0.0, 1e-12);
}

TEST(Predict, PureDistanceWalksAlongTheLine) {
  // Collinear zones: any direction-consistent walk is optimal.
  const Route r = route_from_stops({station_stop("stn", {0, 0}), zoned_stop("c", {0.03, 0}, "C"),
                                    zoned_stop("a", {0.01, 0}, "A"), zoned_stop("b", {0.02, 0}, "B")});
  const auto model = trained_on({{"C", "A", "B"}, {"B", "C", "A"}}, zs({"A", "B", "C"}));
  for (auto metric : {MetricChoice::Euclidean, MetricChoice::TravelTime}) {
    const auto z = predict_zone_sequence(r, model, WeightConfig::scalar(1.0, metric)).zones;
    EXPECT_TRUE(z == zs({"A", "B", "C"}) || z == zs({"C", "B", "A"})) << to_string(metric);
  }
}

TEST(Predict, CompareDirectionsNeverPicksTheDearerDirection) {
  Rng rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const Route r = random_route(rng, uniform_index(rng, 3, 7), 2);
    const auto model = to_transition_matrix(CountMatrix(StationId{"S"}, r.zones()));
    PredictorOptions opts;
    opts.compare_directions = true;
    const RoutePlanner planner(r, opts);
    const auto w = WeightConfig::scalar(uniform_real(rng, 0, 1));
    const auto c = planner.costs(model, w).values;
    SolveReport rep;
    planner.zone_sequence(model, w, &rep);
    std::vector<std::size_t> rev{rep.order.front()};
    rev.insert(rev.end(), rep.order.rbegin(), rep.order.rend() - 1);
    EXPECT_LE(oracle::path_sum(c, rep.order) + c(rep.order.back(), 0), tour_cost(c, rev) + 1e-12);
    EXPECT_NEAR(rep.objective, oracle::brute_tour(c, 0).cost, 1e-9);
  }
}

TEST(EntryStop, NearestToCenterWithIdTieBreak) {
  const Route r = route_from_stops({station_stop("stn", {0, 0}), zoned_stop("far", {0.03, 0}, "A"),
                                    zoned_stop("mid", {0.011, 0}, "A"), zoned_stop("low", {0.001, 0}, "A"),
                                    zoned_stop("q", {0.05, 0.001}, "B"), zoned_stop("p", {0.05, -0.001}, "B")});
  const auto g = zone_centers(r);
  EXPECT_EQ(select_entry_stop(zone("A"), r, g), 2u);
  EXPECT_EQ(select_entry_stop(zone("B"), r, g), 5u);
  EXPECT_EQ(RoutePlanner(r).entry_stop(zone("B")), 5u);
  EXPECT_THROW(select_entry_stop(zone("C"), r, g), Error);
}

TEST(StopSequence, LookaheadPullsTheExitTowardsTheNextZone) {
  // Zone A is a row of three stops; B lies past the right end. Leaving A at
  // its right end keeps the step into B short.
  const Route r = route_from_stops({station_stop("stn", {0, 0}), zoned_stop("a1", {0.01, 0}, "A"),
                                    zoned_stop("a2", {0.01, 0.01}, "A"), zoned_stop("a3", {0.01, 0.02}, "A"),
                                    zoned_stop("b", {0.01, 0.03}, "B")});
  const auto p = predict_stop_sequence(r, ZoneSequence{StationId{"S"}, zs({"A", "B"})});
  EXPECT_EQ(p.stop_order, (Sequence{0, 1, 2, 3, 4}));
  EXPECT_EQ(p.local_reports.size(), 2u);
}

TEST(StopSequence, RejectsZoneListsThatDoNotMatchTheRoute) {
  const Route r = route_from_stops({station_stop("stn", {0, 0}), zoned_stop("a", {0.01, 0}, "A"),
                                    zoned_stop("b", {0.02, 0}, "B")});
  for (const auto& bad : {zs({"A"}), zs({"A", "A", "B"}), zs({"A", "C"})}) {
    try {
      predict_stop_sequence(r, ZoneSequence{StationId{"S"}, bad});
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ZoneMismatch);
    }
  }
}

TEST(StopSequence, UnzonedStopsAreAPrecondition) {
  Route r = route_from_stops({station_stop("stn", {0, 0}), zoned_stop("a", {0.01, 0}, "A"),
                              Stop{StopId{"u"}, {0.02, 0}, std::nullopt, false}});
  EXPECT_THROW(RoutePlanner{r}, Error);
}

TEST(StopSequenceProperty, MatchesChainedBrutePaths) {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const Route r = random_route(rng, uniform_index(rng, 1, 5), 5);
    auto order = r.zones();
    std::shuffle(order.begin(), order.end(), rng);
    const auto p = predict_stop_sequence(r, ZoneSequence{StationId{"S"}, order});
    if (order.size() == 1) {
      EXPECT_NEAR(oracle::path_sum(r.travel_times, p.stop_order) + r.travel_times(p.stop_order.back(), 0),
                  oracle::brute_tour(r.travel_times, 0).cost, 1e-9);
    } else {
      EXPECT_EQ(p.stop_order, stop_sequence_oracle(r, order));
    }
  }
}

TEST(PredictProperty, PermutationContiguityBlockOrderAndDeterminism) {
  Rng rng(1234);
  for (int trial = 0; trial < 80; ++trial) {
    const Route r = random_route(rng, uniform_index(rng, 1, 8), 4);
    std::vector<std::vector<std::string>> history;
    for (int h = 0; h < 5; ++h) {
      auto z = r.zones();
      std::shuffle(z.begin(), z.end(), rng);
      history.emplace_back();
      for (const auto& x : z) history.back().push_back(x.value);
    }
    const auto model = trained_on(history, r.zones());
    const WeightConfig w = trial % 2 ? WeightConfig::scalar(uniform_real(rng, 0, 1))
                                     : WeightConfig::station_weights(uniform_real(rng, 0, 1), uniform_real(rng, 0, 1),
                                                                     uniform_real(rng, 0, 1), MetricChoice::Euclidean);
    const auto p = predict(r, model, w);
    EXPECT_TRUE(is_permutation_of(r, p.stop_order));
    EXPECT_EQ(p.stop_order.front(), r.station_index());

    // Each zone forms one block and the blocks follow the zone order.
    std::vector<ZoneId> blocks;
    for (std::size_t k = 1; k < p.stop_order.size(); ++k) {
      const ZoneId& z = *r.stops[p.stop_order[k]].zone;
      if (blocks.empty() || blocks.back() != z) blocks.push_back(z);
    }
    EXPECT_EQ(blocks, p.zone_order.zones);
    EXPECT_EQ(std::set<ZoneId>(blocks.begin(), blocks.end()).size(), blocks.size());
    EXPECT_EQ(blocks, predict_zone_sequence(r, model, w).zones);

    const auto again = predict(r, model, w);
    EXPECT_EQ(again.stop_order, p.stop_order);
  }
}

TEST(ZoneModel, StationsAndFallback) {
  Rng rng(2);
  Corpus c;
  Route r = random_route(rng, 3, 2, "S", "r1");
  r.actual_sequence = zone_contiguous_sequence(rng, r);
  c.add(r);
  ZoneModel m = ZoneModel::learn(c);
  EXPECT_TRUE(m.has_station(StationId{"S"}));
  EXPECT_THROW(m.for_station(StationId{"T"}), Error);
  m.ensure_stations({StationId{"T"}});
  EXPECT_EQ(m.for_station(StationId{"T"}).probs.size(), 1u);

  // A route predicted under a model for another station is refused.
  try {
    predict(r, m.for_station(StationId{"T"}), WeightConfig::scalar(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StationMismatch);
  }
  // The observation-free model still yields a valid prediction.
  const Route other = random_route(rng, 4, 2, "T", "r2");
  EXPECT_TRUE(is_permutation_of(other, predict(other, m.for_station(StationId{"T"}), WeightConfig::scalar(0.3)).stop_order));
}
