#pragma once

// Truck-only comparison: every node visited by the truck, no drones.

#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoecho/grasp.hpp"
#include "twoecho/model.hpp"
#include "twoecho/tsp.hpp"

namespace twoecho {

inline constexpr int kExactTspLimit = 16;

struct TspResult {
  std::vector<int> tour;  // starts at point 0, return implicit
  double objective = 0.0;  // hours
  bool exact = false;
};

/// Manhattan closed tour over `points` starting at points[0].
/// Held-Karp up to kExactTspLimit points, local-search heuristic beyond.
inline TspResult solve_tsp(std::span<const Point> points, double truck_speed) {
  if (points.empty()) throw std::invalid_argument("solve_tsp: no points");
  if (truck_speed <= 0) throw std::invalid_argument("solve_tsp: truck speed must be positive");
  const int n = static_cast<int>(points.size());
  auto dist = [&](int a, int b) { return manhattan(points[a], points[b]) / truck_speed; };
  TspResult r;
  if (n <= kExactTspLimit) {
    const HeldKarp<decltype(dist)> hk(n, dist);
    const std::size_t all = (std::size_t{1} << (n - 1)) - 1;
    r.tour = hk.tour(all);
    r.exact = true;
  } else {
    r.tour = heuristic_tour(n, dist);
  }
  r.objective = closed_tour_length(r.tour, dist);
  return r;
}

/// 100 (tsp - obj) / tsp. Negative when the drones lose.
inline double gap_percent(double tsp_obj, double obj) {
  if (!(tsp_obj > 0)) throw std::invalid_argument("gap_percent: TSP objective must be positive");
  return 100.0 * (tsp_obj - obj) / tsp_obj;
}

struct CompareRow {
  RunReport report;
  double truck_speed = 0.0;
  double tsp = 0.0;
  bool tsp_exact = false;
};

/// Runs multi-trip GRASP on `inst` for every (drone speed, fleet size) pair
/// and compares with the truck-only tour over the same truck nodes.
inline std::vector<CompareRow> compare_mode(const Instance& inst, std::span<const double> speeds,
                                            std::span<const int> fleet_sizes, GraspConfig cfg) {
  cfg.variant = Variant::MultiTrip;
  const TspResult tsp = solve_tsp(inst.truck_nodes, inst.truck_speed);
  std::vector<CompareRow> rows;
  for (double speed : speeds) {
    for (int u : fleet_sizes) {
      Instance cur = inst;
      cur.drone_speed = speed;
      cur.num_drones = u;
      const TimeMatrices mats(cur);
      validate(cur, mats);
      CompareRow row;
      row.report = run_grasp(cur, mats, cfg).report;
      row.truck_speed = inst.truck_speed;
      row.tsp = tsp.objective;
      row.tsp_exact = tsp.exact;
      row.report.gap_percent = gap_percent(tsp.objective, row.report.objective);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline void write_compare_csv(std::ostream& os, std::span<const CompareRow> rows) {
  os << "Data,v_t,v_d,u,TSP,TSP_exact,|V_t|,Obj,T_d,T_t,Gap,Time,TSP_min,Obj_min,T_d_min,T_t_min\n";
  char buf[512];
  for (const auto& row : rows) {
    const RunReport& r = row.report;
    std::snprintf(buf, sizeof buf,
                  "%s,%g,%g,%d,%.3f,%s,%d,%.3f,%.3f,%.3f,%.2f,%.2f,%.1f,%.1f,%.1f,%.1f\n",
                  r.instance.c_str(), row.truck_speed, r.drone_speed, r.num_drones, row.tsp,
                  row.tsp_exact ? "exact" : "approx", r.visited_nodes, r.objective, r.wait_time,
                  r.travel_time, r.gap_percent.value_or(0.0), r.wall_time, row.tsp * 60,
                  r.objective * 60, r.wait_time * 60, r.travel_time * 60);
    os << buf;
  }
}

}  // namespace twoecho
