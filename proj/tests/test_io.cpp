#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "twoecho/grasp.hpp"
#include "twoecho/io.hpp"

using namespace twoecho;

TEST(InstanceJson, RoundTrip) {
  GenConfig cfg;
  cfg.seed = 12;
  const Instance inst = generate(cfg);
  const Json j = to_json(inst);
  const Instance back = instance_from_json(Json::parse(dump(j)));
  EXPECT_EQ(back.name, inst.name);
  EXPECT_EQ(back.truck_nodes, inst.truck_nodes);
  EXPECT_EQ(back.customers, inst.customers);
  EXPECT_EQ(back.num_drones, inst.num_drones);
  EXPECT_EQ(back.seed, inst.seed);
  EXPECT_EQ(back.rng_algorithm, inst.rng_algorithm);
  EXPECT_EQ(dump(to_json(back)), dump(j));
}

TEST(InstanceJson, SchemaKeys) {
  const Json j = to_json(generate(GenConfig{}));
  for (const char* key : {"name", "d", "truck_speed", "drone_speed", "endurance", "num_drones",
                          "truck_nodes", "customers", "seed", "rng"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["truck_nodes"][0].size(), 2u);
}

TEST(InstanceJson, UnknownKeysIgnoredAndDefaultsApplied) {
  const Json j = Json::parse(R"({"truck_nodes": [[0,0],[1,2]], "customers": [[1,1]],
                                 "future_field": {"a": 1}})");
  const Instance inst = instance_from_json(j);
  EXPECT_EQ(inst.n(), 2);
  EXPECT_EQ(inst.m(), 1);
  EXPECT_DOUBLE_EQ(inst.truck_speed, 40.0);
  EXPECT_DOUBLE_EQ(inst.endurance, 0.5);
  EXPECT_EQ(inst.num_drones, 1);
}

TEST(InstanceJson, BadInputsAreFormatErrors) {
  EXPECT_THROW(instance_from_json(Json::parse(R"({"customers": []})")), FormatError);
  EXPECT_THROW(instance_from_json(Json::parse(R"({"truck_nodes": [[0]]})")), FormatError);
  EXPECT_THROW(instance_from_json(Json::parse(R"({"truck_nodes": [[0,0]], "num_drones": "x"})")),
               FormatError);
}

TEST(SolutionJson, RoundTripBothVariants) {
  const Instance inst = generate(GenConfig{});
  const TimeMatrices mats(inst);
  for (Variant v : {Variant::SingleTrip, Variant::MultiTrip}) {
    GraspConfig cfg;
    cfg.n_max = 20;
    cfg.variant = v;
    const Solution sol = run_grasp(inst, mats, cfg).best;
    const Json j = to_json(sol);
    EXPECT_EQ(j["drone_of"].is_null(), v == Variant::SingleTrip);
    Solution back = solution_from_json(Json::parse(dump(j)), inst.m());
    EXPECT_EQ(back.tour, sol.tour);
    EXPECT_EQ(back.assign, sol.assign);
    EXPECT_EQ(back.drone_of, sol.drone_of);
    evaluate_into(back, inst, mats);
    EXPECT_EQ(dump(to_json(back)), dump(j));
  }
}

TEST(SolutionJson, MapsAreKeyedByIndex) {
  Solution s;
  s.tour = {0, 2};
  s.assign = {2, 2};
  s.waits = {0, 0, 0.5};
  s.arrivals = {0, 0, 0.25};
  const Json j = to_json(s);
  EXPECT_EQ(j["assign"]["1"], 2);
  EXPECT_DOUBLE_EQ(j["waits"]["2"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["arrivals"]["2"].get<double>(), 0.25);
  EXPECT_FALSE(j["waits"].contains("1"));
}

TEST(SolutionJson, BadInputs) {
  EXPECT_THROW(solution_from_json(Json::parse(R"({"variant":"x","tour":[0],"assign":{}})"), 0),
               FormatError);
  EXPECT_THROW(solution_from_json(Json::parse(R"({"variant":"s","tour":[0],"assign":{"5":1}})"), 2),
               FormatError);
  EXPECT_THROW(solution_from_json(Json::parse(R"({"variant":"m","tour":[0],"assign":{}})"), 0),
               FormatError);
  const Solution s = solution_from_json(
      Json::parse(R"({"variant":"s","tour":[0,1],"assign":{"1":1},"extra":true})"), 2);
  EXPECT_EQ(s.assign, (std::vector<int>{-1, 1}));
}

TEST(ReportJson, RoundTrip) {
  RunReport r;
  r.instance = "20-5-15";
  r.variant = Variant::MultiTrip;
  r.num_drones = 3;
  r.drone_speed = 60;
  r.visited_nodes = 4;
  r.objective = 1.5;
  r.wait_time = 0.5;
  r.travel_time = 1.0;
  r.gap_percent = 12.5;
  r.iterations = 10;
  r.failed_constructions = 2;
  r.wall_time = 0.01;
  const RunReport back = report_from_json(Json::parse(dump(to_json(r))));
  EXPECT_EQ(dump(to_json(back)), dump(to_json(r)));
  r.gap_percent.reset();
  EXPECT_FALSE(report_from_json(to_json(r)).gap_percent.has_value());
}

TEST(Variant, Parsing) {
  EXPECT_EQ(parse_variant("s"), Variant::SingleTrip);
  EXPECT_EQ(parse_variant("multi"), Variant::MultiTrip);
  EXPECT_THROW(parse_variant("both"), FormatError);
}
