#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "twoecho/exact.hpp"
#include "twoecho/tsp.hpp"

using namespace twoecho;
using fixtures::make;

TEST(MinMakespan, SmallCases) {
  const std::vector<double> t{0.5, 0.6, 0.8};
  EXPECT_NEAR(min_makespan(t, 1), 1.9, 1e-12);
  EXPECT_NEAR(min_makespan(t, 2), 1.1, 1e-12);
  EXPECT_NEAR(min_makespan(t, 3), 0.8, 1e-12);
  EXPECT_NEAR(min_makespan(t, 4), 0.8, 1e-12);
  EXPECT_DOUBLE_EQ(min_makespan({}, 2), 0.0);
}

TEST(MinMakespan, MatchesLabelledEnumeration) {
  Rng rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const int c = 1 + static_cast<int>(uniform_index(rng, 6));
    const int u = 1 + static_cast<int>(uniform_index(rng, 4));
    std::vector<double> trips(c);
    for (auto& t : trips) t = uniform(rng, 0.0, 0.5);
    std::vector<int> drone;
    const double got = min_makespan(trips, u, &drone);
    EXPECT_NEAR(got, oracle::min_makespan(trips, u), 1e-12);
    std::vector<double> load(u, 0.0);
    for (int x = 0; x < c; ++x) load[drone[x]] += trips[x];
    EXPECT_NEAR(*std::max_element(load.begin(), load.end()), got, 1e-12);
  }
}

TEST(HeldKarp, MatchesPermutations) {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 8));
    Instance inst;
    for (int i = 0; i < n; ++i) inst.truck_nodes.push_back({uniform(rng, 0, 10), uniform(rng, 0, 10)});
    const TimeMatrices mats(inst);
    auto dist = [&](int a, int b) { return mats.truck(a, b); };
    const HeldKarp<decltype(dist)> hk(n, dist);
    const std::size_t all = (std::size_t{1} << (n - 1)) - 1;
    EXPECT_NEAR(hk.tour_cost(all), oracle::tsp(inst.truck_nodes, 40), 1e-12);
    const auto tour = hk.tour(all);
    EXPECT_EQ(static_cast<int>(tour.size()), n);
    EXPECT_NEAR(closed_tour_length(tour, dist), hk.tour_cost(all), 1e-12);
  }
}

TEST(Exact, NoCustomers) {
  const Instance inst = make({{0, 0}, {5, 5}, {1, 1}}, {});
  const TimeMatrices mats(inst);
  for (Variant v : {Variant::SingleTrip, Variant::MultiTrip}) {
    const ExactResult r = solve_exact(inst, mats, v);
    EXPECT_DOUBLE_EQ(r.objective, 0.0);
    EXPECT_EQ(r.solution.tour, std::vector<int>{0});
  }
}

TEST(Exact, OneCustomerClosedForm) {
  const Instance inst = make({{0, 0}, {8, 0}, {0, 9}, {-3, -3}}, {{4, 4}});
  const TimeMatrices mats(inst);
  double expected = oracle::kInf;
  for (int i : mats.launch_nodes(0)) {
    expected = std::min(expected, mats.truck(0, i) + mats.truck(i, 0) + mats.round_trip(i, 0));
  }
  for (Variant v : {Variant::SingleTrip, Variant::MultiTrip}) {
    EXPECT_NEAR(solve_exact(inst, mats, v).objective, expected, 1e-12);
  }
}

TEST(Exact, MatchesFullEnumeration) {
  for (const Instance& inst : fixtures::tiny_suite(15)) {
    const TimeMatrices mats(inst);
    for (Variant v : {Variant::SingleTrip, Variant::MultiTrip}) {
      const ExactResult r = solve_exact(inst, mats, v);
      EXPECT_NEAR(r.objective, oracle::brute_force(inst, v), 1e-9) << inst.name;
      EXPECT_TRUE(check_feasibility(r.solution, inst, mats).empty());
      EXPECT_EQ(r.subsets_examined, 1LL << (inst.n() - 1));
    }
  }
}

TEST(Exact, RefusesLargeInstances) {
  GenConfig cfg;
  cfg.n_truck = 9;
  cfg.m_customers = 3;
  const Instance inst = generate(cfg);
  const TimeMatrices mats(inst);
  try {
    solve_exact(inst, mats, Variant::SingleTrip);
    FAIL() << "expected ExactTooLarge";
  } catch (const ExactTooLarge& e) {
    EXPECT_NE(std::string(e.what()).find("n=9"), std::string::npos);
  }
  ExactLimits wide;
  wide.max_truck_nodes = 9;
  EXPECT_NO_THROW(solve_exact(inst, mats, Variant::SingleTrip, wide));
}

TEST(Exact, InfeasibleSingleTripThrows) {
  const Instance inst = make({{0, 0}, {8, 0}}, {{8, 1}, {8, 2}}, 1);
  const TimeMatrices mats(inst);
  EXPECT_THROW(solve_exact(inst, mats, Variant::SingleTrip), InvalidInstance);
  EXPECT_NO_THROW(solve_exact(inst, mats, Variant::MultiTrip));
}
