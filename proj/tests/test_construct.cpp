#include <gtest/gtest.h>

#include <array>

#include "fixtures.hpp"
#include "twoecho/construct.hpp"

using namespace twoecho;
using fixtures::make;

namespace {

std::vector<double> frequencies(const std::vector<double>& costs, int draws) {
  Rng rng(42);
  std::vector<double> hits(costs.size(), 0.0);
  for (int d = 0; d < draws; ++d) hits[roulette_index(costs, rng)] += 1.0;
  for (auto& h : hits) h /= draws;
  return hits;
}

}  // namespace

TEST(Roulette, EqualCostsAreEquallyLikely) {
  const auto f = frequencies({1, 1}, 200000);
  EXPECT_NEAR(f[0], 0.5, 0.005);
  EXPECT_NEAR(f[1], 0.5, 0.005);
}

TEST(Roulette, WeightIsInverseCost) {
  const auto f = frequencies({1, 3}, 200000);
  EXPECT_NEAR(f[0], 0.75, 0.005);
  EXPECT_NEAR(f[1], 0.25, 0.005);
}

TEST(Roulette, SingleCandidateAlwaysPicked) {
  Rng rng(1);
  const std::vector<double> one{5.0};
  for (int d = 0; d < 100; ++d) EXPECT_EQ(roulette_index(one, rng), 0u);
}

TEST(Roulette, ZeroCostDominates) {
  const auto f = frequencies({0.0, 1.0}, 10000);
  EXPECT_GT(f[0], 0.999);
}

TEST(Roulette, EmptyListIsALogicError) {
  Rng rng(1);
  EXPECT_THROW(roulette_index(std::span<const double>{}, rng), std::logic_error);
}

TEST(Roulette, PickReturnsTheDrawnCandidate) {
  Rng rng(3);
  std::array<CandidateOp, 1> ops{};
  ops[0].node = 4;
  EXPECT_EQ(roulette_pick(ops, rng).node, 4);
}

TEST(InsertionCost, ManhattanDetour) {
  const Instance inst = make({{0, 0}, {4, 0}, {2, 2}}, {});
  const TimeMatrices mats(inst);
  EXPECT_NEAR(truck_insertion_cost(2, 0, 1, mats), 0.1, 1e-12);
}

TEST(InsertionCost, NodeOnTheGeodesicIsFree) {
  const Instance inst = make({{0, 0}, {4, 4}, {1, 3}}, {});
  const TimeMatrices mats(inst);
  EXPECT_NEAR(truck_insertion_cost(2, 0, 1, mats), 0.0, 1e-12);
}

TEST(AssignmentCost, VisitedNodeWithinCurrentWait) {
  EXPECT_DOUBLE_EQ(assignment_cost(0.8, single_trip_wait_after(0.8, 0.6), true, 0.3), 0.0);
}

TEST(AssignmentCost, VisitedNodeLongerTrip) {
  EXPECT_NEAR(assignment_cost(0.8, single_trip_wait_after(0.8, 1.0), true, 0.3), 0.2, 1e-12);
}

TEST(AssignmentCost, UnvisitedNodePaysTheDetour) {
  EXPECT_NEAR(assignment_cost(0.0, single_trip_wait_after(0.0, 0.6), false, 0.1), 0.7, 1e-12);
}

TEST(AssignmentCost, MultiTripUsesTheLeastLoadedDrone) {
  EXPECT_NEAR(multi_trip_wait_after(0.9, 0.2, 0.5), 0.9, 1e-12);
  EXPECT_NEAR(multi_trip_wait_after(0.9, 0.6, 0.5), 1.1, 1e-12);
}

TEST(Construct, NoCustomers) {
  const Instance inst = make({{0, 0}, {3, 3}}, {});
  const TimeMatrices mats(inst);
  Rng rng(1);
  for (Variant v : {Variant::SingleTrip, Variant::MultiTrip}) {
    auto sol = construct_solution(inst, mats, v, rng);
    ASSERT_TRUE(sol);
    EXPECT_EQ(sol->tour, std::vector<int>{0});
    EXPECT_DOUBLE_EQ(sol->objective, 0.0);
  }
}

TEST(Construct, SingleReachableNodeIsForced) {
  // Customer reachable from node 2 only.
  const Instance inst = make({{0, 0}, {-15, 0}, {8, 0}}, {{8, 6}});
  const TimeMatrices mats(inst);
  Rng rng(1);
  for (Variant v : {Variant::SingleTrip, Variant::MultiTrip}) {
    auto sol = construct_solution(inst, mats, v, rng);
    ASSERT_TRUE(sol);
    EXPECT_EQ(sol->tour, (std::vector<int>{0, 2}));
    EXPECT_EQ(sol->assign, std::vector<int>{2});
    EXPECT_NEAR(sol->objective, 2 * mats.truck(0, 2) + mats.round_trip(2, 0), 1e-12);
  }
}

TEST(Construct, SeededRunsAreFeasible) {
  GenConfig cfg;
  cfg.n_truck = 5;
  cfg.m_customers = 6;
  cfg.d = 12;
  cfg.seed = 21;
  Instance inst = generate(cfg);
  inst.num_drones = std::max(inst.num_drones, 2);
  const TimeMatrices mats(inst);
  for (Variant v : {Variant::SingleTrip, Variant::MultiTrip}) {
    int built = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Rng rng(seed);
      auto sol = construct_solution(inst, mats, v, rng);
      if (!sol) continue;
      ++built;
      EXPECT_TRUE(check_feasibility(*sol, inst, mats).empty());
      EXPECT_NEAR(sol->objective, evaluate(*sol, inst, mats).objective, 1e-12);
    }
    EXPECT_GT(built, 0);
  }
}

TEST(Construct, MultiTripNeverFails) {
  // Unlimited trips per drone: every customer always has an option.
  Rng rng(3);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.num_drones = 1;
    const Instance inst = generate(cfg);
    const TimeMatrices mats(inst);
    EXPECT_TRUE(construct_solution(inst, mats, Variant::MultiTrip, rng).has_value());
  }
}

TEST(Construct, SameSeedSameSolution) {
  const Instance inst = generate(GenConfig{});
  const TimeMatrices mats(inst);
  Rng a(9), b(9);
  auto x = construct_solution(inst, mats, Variant::MultiTrip, a);
  auto y = construct_solution(inst, mats, Variant::MultiTrip, b);
  ASSERT_TRUE(x && y);
  EXPECT_EQ(x->tour, y->tour);
  EXPECT_EQ(x->assign, y->assign);
  EXPECT_EQ(x->drone_of, y->drone_of);
}

TEST(Construct, SingleTripCanDeadEnd) {
  // Two customers, one drone, and only node 1 reaches customer 1; customer 0
  // is reachable from nodes 1 and 2. Some draws give node 1 to customer 0
  // first and leave customer 1 stranded.
  const Instance inst = make({{0, 0}, {8, 0}, {-8, 0}}, {{0, 0.5}, {12, 0}}, 1);
  const TimeMatrices mats(inst);
  int failed = 0, built = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    auto sol = construct_solution(inst, mats, Variant::SingleTrip, rng);
    if (sol) {
      ++built;
      EXPECT_TRUE(check_feasibility(*sol, inst, mats).empty());
    } else {
      ++failed;
    }
  }
  EXPECT_GT(built, 0);
  EXPECT_GT(failed, 0);
}
