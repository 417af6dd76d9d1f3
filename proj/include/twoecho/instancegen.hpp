#pragma once

// Random instance generation and the minimum per-node drone count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoecho/model.hpp"
#include "twoecho/rng.hpp"

namespace twoecho {

class GenerationImpossible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenConfig {
  double d = 20.0;
  int n_truck = 5;       // truck nodes, depot included
  int m_customers = 15;
  double truck_speed = 40.0;
  double drone_speed = 40.0;
  double endurance = 0.5;
  std::uint64_t seed = 1;
  // Customers must be in range at this speed, so one geometry serves every
  // drone speed at or above it.
  double reference_drone_speed = 40.0;
  std::optional<int> num_drones;  // defaults to u_min
  long long max_draws_per_customer = 1'000'000;
};

namespace detail {

inline std::string format_dimension(double d) {
  std::ostringstream os;
  if (d == std::floor(d) && std::abs(d) < 1e15) {
    os << static_cast<long long>(d);
  } else {
    os << d;
  }
  return os.str();
}

// Capacitated bipartite assignment by augmenting paths: each customer needs
// one node from its list, each node takes at most `cap` customers.
class CapacitatedMatcher {
 public:
  CapacitatedMatcher(std::span<const std::vector<int>> reach, int num_nodes, int cap)
      : reach_(reach), cap_(cap), holders_(num_nodes), assign_(reach.size(), -1) {}

  bool solve() {
    for (int k = 0; k < static_cast<int>(reach_.size()); ++k) {
      seen_.assign(holders_.size(), 0);
      if (!augment(k)) return false;
    }
    return true;
  }

  const std::vector<int>& assignment() const { return assign_; }

 private:
  bool augment(int k) {
    for (int i : reach_[k]) {
      if (seen_[i]) continue;
      seen_[i] = 1;
      if (static_cast<int>(holders_[i].size()) < cap_) {
        take(k, i);
        return true;
      }
      for (std::size_t h = 0; h < holders_[i].size(); ++h) {
        const int other = holders_[i][h];
        if (augment(other)) {
          // `other` moved elsewhere; its slot at i goes to k.
          holders_[i][h] = k;
          assign_[k] = i;
          return true;
        }
      }
    }
    return false;
  }

  void take(int k, int i) {
    holders_[i].push_back(k);
    assign_[k] = i;
  }

  std::span<const std::vector<int>> reach_;
  int cap_;
  std::vector<std::vector<int>> holders_;
  std::vector<int> assign_;
  std::vector<char> seen_;
};

}  // namespace detail

/// Assignment of every customer to a node from its list with at most `cap`
/// customers per node, or nullopt when none exists.
inline std::optional<std::vector<int>> capacitated_assignment(
    std::span<const std::vector<int>> reach, int num_nodes, int cap) {
  detail::CapacitatedMatcher matcher(reach, num_nodes, cap);
  if (!matcher.solve()) return std::nullopt;
  return matcher.assignment();
}

struct DroneBound {
  int u_min = 1;
  std::vector<int> witness;  // customer -> node achieving load <= u_min
};

/// Smallest per-node capacity admitting a full assignment (binary search over
/// the capacity, matching as the feasibility test).
inline DroneBound min_drone_count(std::span<const std::vector<int>> reach, int num_nodes) {
  for (std::size_t k = 0; k < reach.size(); ++k) {
    if (reach[k].empty()) {
      throw InvalidInstance("customer " + std::to_string(k) + " has no launch node");
    }
  }
  const int m = static_cast<int>(reach.size());
  if (m == 0) return {1, {}};
  int lo = 1;
  int hi = m;  // always feasible: every node may take everyone
  std::vector<int> best = *capacitated_assignment(reach, num_nodes, hi);
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (auto a = capacitated_assignment(reach, num_nodes, mid)) {
      hi = mid;
      best = std::move(*a);
    } else {
      lo = mid + 1;
    }
  }
  return {lo, std::move(best)};
}

inline DroneBound compute_u_min(const Instance& inst, const TimeMatrices& mats) {
  std::vector<std::vector<int>> reach(inst.m());
  for (int k = 0; k < inst.m(); ++k) {
    reach[k].assign(mats.launch_nodes(k).begin(), mats.launch_nodes(k).end());
  }
  return min_drone_count(reach, inst.n());
}

/// Uniform points in [0,d]^2; customers out of range of every non-depot
/// node at the reference speed are redrawn.
inline Instance generate(const GenConfig& cfg) {
  if (cfg.n_truck < 1 || cfg.m_customers < 0 || !(cfg.d > 0.0)) {
    throw std::invalid_argument("generate: need n >= 1, m >= 0, d > 0");
  }
  Rng rng(cfg.seed);
  Instance inst;
  inst.name = detail::format_dimension(cfg.d) + "-" + std::to_string(cfg.n_truck) + "-" +
              std::to_string(cfg.m_customers);
  inst.d = cfg.d;
  inst.truck_speed = cfg.truck_speed;
  inst.drone_speed = cfg.drone_speed;
  inst.endurance = cfg.endurance;
  inst.seed = cfg.seed;
  inst.rng_algorithm = kRngName;

  for (int i = 0; i < cfg.n_truck; ++i) {
    inst.truck_nodes.push_back({uniform(rng, 0.0, cfg.d), uniform(rng, 0.0, cfg.d)});
  }
  const double reach = cfg.endurance * cfg.reference_drone_speed / 2.0;
  for (int k = 0; k < cfg.m_customers; ++k) {
    long long draws = 0;
    for (;;) {
      if (++draws > cfg.max_draws_per_customer) {
        throw GenerationImpossible("could not place customer " + std::to_string(k) +
                                   " within " + std::to_string(reach) +
                                   " km of a launch node");
      }
      const Point p{uniform(rng, 0.0, cfg.d), uniform(rng, 0.0, cfg.d)};
      bool ok = false;
      for (int i = 1; i < cfg.n_truck && !ok; ++i) {
        // Same test the time matrices apply, evaluated at the reference speed.
        ok = 2.0 * euclidean(inst.truck_nodes[i], p) / cfg.reference_drone_speed <=
             cfg.endurance + kTimeEps;
      }
      if (ok) {
        inst.customers.push_back(p);
        break;
      }
    }
  }

  if (cfg.num_drones) {
    inst.num_drones = *cfg.num_drones;
  } else {
    Instance ref = inst;
    ref.drone_speed = cfg.reference_drone_speed;
    inst.num_drones = compute_u_min(ref, TimeMatrices(ref)).u_min;
  }
  return inst;
}

/// Instance whose truck nodes coincide with the customers: n_total uniform
/// points, point 0 is the depot, points 1.. are both truck nodes and customers.
inline Instance generate_coincident(double d, int n_total, std::uint64_t seed,
                                    double truck_speed = 40.0, double drone_speed = 40.0,
                                    double endurance = 0.5, int num_drones = 2) {
  if (n_total < 1 || !(d > 0.0)) throw std::invalid_argument("generate_coincident: bad size");
  Rng rng(seed);
  Instance inst;
  inst.name = detail::format_dimension(d) + "-" + std::to_string(n_total);
  inst.d = d;
  inst.truck_speed = truck_speed;
  inst.drone_speed = drone_speed;
  inst.endurance = endurance;
  inst.num_drones = num_drones;
  inst.seed = seed;
  inst.rng_algorithm = kRngName;
  for (int i = 0; i < n_total; ++i) {
    inst.truck_nodes.push_back({uniform(rng, 0.0, d), uniform(rng, 0.0, d)});
  }
  inst.customers.assign(inst.truck_nodes.begin() + 1, inst.truck_nodes.end());
  return inst;
}

/// True when truck_nodes == [depot] + customers.
inline bool is_coincident(const Instance& inst) {
  return inst.n() == inst.m() + 1 &&
         std::equal(inst.customers.begin(), inst.customers.end(), inst.truck_nodes.begin() + 1);
}

}  // namespace twoecho
