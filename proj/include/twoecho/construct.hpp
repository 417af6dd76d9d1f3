#pragma once

// Greedy randomized construction: cheapest insertion where every choice
// (insertion arc per unvisited node, launch node per customer, next customer)
// is drawn by roulette wheel with probability proportional to 1/cost.

#include <algorithm>
#include <cassert>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "twoecho/model.hpp"
#include "twoecho/rng.hpp"

namespace twoecho {

/// Added to every roulette cost so zero-cost candidates stay finite.
inline constexpr double kRouletteEps = 1e-6;

struct CandidateOp {
  enum class Kind { InsertTruckNode, AssignCustomer };
  Kind kind = Kind::AssignCustomer;
  double cost = 0.0;
  int node = -1;
  int position = -1;  // InsertTruckNode: insert after tour[position]
  int customer = -1;
  int drone = -1;
};

/// Index i drawn with probability (1/(c_i+eps)) / sum_j (1/(c_j+eps)).
inline std::size_t roulette_index(std::span<const double> costs, Rng& rng) {
  if (costs.empty()) throw std::logic_error("roulette over an empty candidate list");
  if (costs.size() == 1) return 0;
  double total = 0.0;
  for (double c : costs) total += 1.0 / (std::max(c, 0.0) + kRouletteEps);
  double r = uniform01(rng) * total;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    r -= 1.0 / (std::max(costs[i], 0.0) + kRouletteEps);
    if (r < 0.0) return i;
  }
  return costs.size() - 1;
}

inline const CandidateOp& roulette_pick(std::span<const CandidateOp> candidates, Rng& rng) {
  std::vector<double> costs;
  costs.reserve(candidates.size());
  for (const auto& c : candidates) costs.push_back(c.cost);
  return candidates[roulette_index(costs, rng)];
}

/// Extra truck time from visiting j between consecutive nodes p and p_next.
inline double truck_insertion_cost(int j, int p, int p_next, const TimeMatrices& mats) {
  return mats.truck(p, j) + mats.truck(j, p_next) - mats.truck(p, p_next);
}

/// Wait after adding a trip at a node with parallel single-trip drones.
inline double single_trip_wait_after(double wait_before, double trip) {
  return std::max(wait_before, trip);
}

/// Wait after adding a trip to the least-loaded drone at a multi-trip node.
inline double multi_trip_wait_after(double wait_before, double least_load, double trip) {
  return std::max(wait_before, least_load + trip);
}

/// Cost of serving a customer from a node: the wait increase, plus the
/// node's insertion cost when the truck does not visit it yet.
inline double assignment_cost(double wait_before, double wait_after, bool node_visited,
                              double insertion_cost) {
  const double dw = wait_after - wait_before;
  return node_visited ? dw : dw + insertion_cost;
}

namespace detail {

class Constructor {
 public:
  Constructor(const Instance& inst, const TimeMatrices& mats, Variant variant, Rng& rng)
      : inst_(inst), mats_(mats), variant_(variant), rng_(rng), u_(inst.num_drones),
        in_tour_(inst.n(), 0), count_(inst.n(), 0), wait_(inst.n(), 0.0),
        ins_after_(inst.n(), -1), ins_cost_(inst.n(), 0.0),
        assign_(inst.m(), -1) {
    tour_.push_back(0);
    in_tour_[0] = 1;
    if (variant_ == Variant::MultiTrip) {
      loads_.assign(static_cast<std::size_t>(inst.n()) * u_, 0.0);
      drone_of_.assign(inst.m(), -1);
    }
  }

  std::optional<Solution> run() {
    std::vector<int> open(inst_.m());
    for (int k = 0; k < inst_.m(); ++k) open[k] = k;

    std::vector<double> node_costs;
    std::vector<int> node_ids;
    std::vector<double> customer_costs(open.size());
    std::vector<int> customer_node(open.size());

    while (!open.empty()) {
      if (tour_dirty_) choose_insertions();

      customer_costs.resize(open.size());
      customer_node.resize(open.size());
      for (std::size_t c = 0; c < open.size(); ++c) {
        const int k = open[c];
        node_costs.clear();
        node_ids.clear();
        for (int i : mats_.launch_nodes(k)) {
          if (variant_ == Variant::SingleTrip && count_[i] >= u_) continue;
          node_ids.push_back(i);
          node_costs.push_back(cost_of(k, i));
        }
        if (node_ids.empty()) return std::nullopt;  // every reachable node saturated
        const std::size_t pick = roulette_index(node_costs, rng_);
        customer_node[c] = node_ids[pick];
        customer_costs[c] = node_costs[pick];
      }

      const std::size_t pick = roulette_index(customer_costs, rng_);
      commit(open[pick], customer_node[pick]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    }

    Solution sol;
    sol.variant = variant_;
    sol.tour = tour_;
    sol.assign = assign_;
    sol.drone_of = drone_of_;
    evaluate_into(sol, inst_, mats_);
    return sol;
  }

 private:
  // Step 1: one roulette-chosen arc per unvisited launch node.
  void choose_insertions() {
    std::vector<double> costs(tour_.size());
    for (int j = 1; j < inst_.n(); ++j) {
      if (in_tour_[j] || mats_.reachable_customers(j).empty()) continue;
      for (std::size_t p = 0; p < tour_.size(); ++p) {
        const int a = tour_[p];
        const int b = p + 1 < tour_.size() ? tour_[p + 1] : 0;
        costs[p] = std::max(0.0, truck_insertion_cost(j, a, b, mats_));
      }
      const std::size_t p = roulette_index(costs, rng_);
      ins_after_[j] = static_cast<int>(p);
      ins_cost_[j] = costs[p];
    }
    tour_dirty_ = false;
  }

  int least_drone(int i) const {
    const double* l = &loads_[static_cast<std::size_t>(i) * u_];
    return static_cast<int>(std::min_element(l, l + u_) - l);
  }

  // Step 2 cost of serving k from i.
  double cost_of(int k, int i) const {
    const double trip = mats_.round_trip(i, k);
    double after;
    if (variant_ == Variant::SingleTrip) {
      after = single_trip_wait_after(wait_[i], trip);
    } else {
      after = multi_trip_wait_after(wait_[i], loads_[static_cast<std::size_t>(i) * u_ + least_drone(i)],
                                    trip);
    }
    return assignment_cost(wait_[i], after, in_tour_[i] != 0, ins_cost_[i]);
  }

  void commit(int k, int i) {
    if (!in_tour_[i]) {
      tour_.insert(tour_.begin() + ins_after_[i] + 1, i);
      in_tour_[i] = 1;
      tour_dirty_ = true;
    }
    const double trip = mats_.round_trip(i, k);
    assign_[k] = i;
    ++count_[i];
    if (variant_ == Variant::SingleTrip) {
      wait_[i] = std::max(wait_[i], trip);
    } else {
      const int l = least_drone(i);
      double& load = loads_[static_cast<std::size_t>(i) * u_ + l];
      load += trip;
      wait_[i] = std::max(wait_[i], load);
      drone_of_[k] = l;
    }
  }

  const Instance& inst_;
  const TimeMatrices& mats_;
  Variant variant_;
  Rng& rng_;
  int u_;

  std::vector<int> tour_;
  std::vector<char> in_tour_;
  bool tour_dirty_ = true;
  std::vector<int> count_;
  std::vector<double> wait_;
  std::vector<double> loads_;
  std::vector<int> ins_after_;
  std::vector<double> ins_cost_;
  std::vector<int> assign_;
  std::vector<int> drone_of_;
};

}  // namespace detail

/// Builds a feasible solution, or returns nullopt when a single-trip
/// customer finds every reachable node saturated.
inline std::optional<Solution> construct_solution(const Instance& inst, const TimeMatrices& mats,
                                                  Variant variant, Rng& rng) {
  return detail::Constructor(inst, mats, variant, rng).run();
}

}  // namespace twoecho
