#pragma once

#include <algorithm>
#include <vector>

#include "twoecho/instancegen.hpp"
#include "twoecho/model.hpp"
#include "twoecho/rng.hpp"

namespace fixtures {

using namespace twoecho;

/// Hand-made instance from coordinates.
inline Instance make(std::vector<Point> nodes, std::vector<Point> customers, int drones = 1,
                     double drone_speed = 40.0) {
  Instance inst;
  inst.name = "hand";
  inst.d = 20;
  inst.truck_nodes = std::move(nodes);
  inst.customers = std::move(customers);
  inst.num_drones = drones;
  inst.drone_speed = drone_speed;
  return inst;
}

/// 30 instances with at most 5 truck nodes and 6 customers; drone counts
/// cycle through 1, 2, 3 (never below the instance's minimum).
inline std::vector<Instance> tiny_suite(int count = 30) {
  std::vector<Instance> out;
  const double sides[] = {8.0, 12.0, 16.0};
  for (std::uint64_t seed = 1; static_cast<int>(out.size()) < count; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.d = sides[seed % 3];
    cfg.n_truck = 3 + static_cast<int>(seed % 3);
    cfg.m_customers = 2 + static_cast<int>(seed % 5);
    Instance inst = generate(cfg);
    const int u = 1 + static_cast<int>(out.size() % 3);
    if (inst.num_drones > u) continue;
    inst.num_drones = u;
    out.push_back(std::move(inst));
  }
  return out;
}

/// Random feasible decision, far from locally optimal, used to feed the
/// operators plenty of improving moves. Empty optional if the draw failed.
inline std::optional<Solution> random_solution_once(const Instance& inst,
                                                    const TimeMatrices& mats, Variant variant,
                                                    Rng& rng) {
  Solution sol;
  sol.variant = variant;
  sol.assign.assign(inst.m(), -1);
  if (variant == Variant::MultiTrip) sol.drone_of.assign(inst.m(), 0);
  std::vector<int> load(inst.n(), 0);
  std::vector<int> order(inst.m());
  for (int k = 0; k < inst.m(); ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng);
  for (int k : order) {
    std::vector<int> options;
    for (int i : mats.launch_nodes(k)) {
      if (variant == Variant::MultiTrip || load[i] < inst.num_drones) options.push_back(i);
    }
    if (options.empty()) return std::nullopt;
    const int i = options[uniform_index(rng, options.size())];
    sol.assign[k] = i;
    ++load[i];
    if (variant == Variant::MultiTrip) {
      sol.drone_of[k] = static_cast<int>(uniform_index(rng, inst.num_drones));
    }
  }
  std::vector<int> nodes;
  for (int i = 1; i < inst.n(); ++i) {
    if (load[i] > 0) nodes.push_back(i);
  }
  std::shuffle(nodes.begin(), nodes.end(), rng);
  sol.tour = {0};
  sol.tour.insert(sol.tour.end(), nodes.begin(), nodes.end());
  evaluate_into(sol, inst, mats);
  return sol;
}

/// Retries random_solution_once; single trip at the minimum drone count can
/// paint itself into a corner.
inline std::optional<Solution> random_solution(const Instance& inst, const TimeMatrices& mats,
                                               Variant variant, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    if (auto sol = random_solution_once(inst, mats, variant, rng)) return sol;
  }
  return std::nullopt;
}

}  // namespace fixtures
