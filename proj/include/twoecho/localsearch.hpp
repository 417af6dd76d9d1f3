#pragma once

// Local search operators. Each `step` scans its neighbourhood in a fixed
// order (tour position, then customer index, then drone index), applies the
// first move improving the objective by more than kTimeEps and returns the
// predicted change. local_search() chains the operators until none improves.

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "twoecho/model.hpp"
#include "twoecho/search_state.hpp"

namespace twoecho {

using MoveTrace = std::function<void(std::string_view op, double delta, double objective)>;

namespace ls {

using StepFn = std::optional<double> (*)(SearchState&);

struct Operator {
  std::string_view name;
  StepFn step;
};

namespace detail {

inline bool improves(double delta) { return delta < -kTimeEps; }

// Tour-leg change from shortcutting the node at position p.
inline double shortcut(const SearchState& s, int node) {
  const auto& m = s.mats();
  const int p = s.position(node);
  const int a = s.prev_of_pos(p);
  const int b = s.next_of_pos(p);
  return m.truck(a, b) - m.truck(a, node) - m.truck(node, b);
}

// Tour-leg change for moving customers onto node j while node `dropping`
// (or -1) leaves the tour. When j is unvisited it enters at its cached
// insertion arc, or takes the dropped node's place if that arc touches it.
struct Entry {
  double legs = 0.0;
  bool insert = false;
  bool replace = false;
  int after = -1;
};

inline Entry entry(SearchState& s, int j, int dropping) {
  Entry e;
  const double drop = dropping >= 0 ? shortcut(s, dropping) : 0.0;
  if (s.visited(j)) {
    e.legs = drop;
    return e;
  }
  const Insertion ins = s.best_insertion(j);
  if (dropping >= 0 && (ins.after == dropping || ins.before == dropping)) {
    const auto& m = s.mats();
    const int p = s.position(dropping);
    const int a = s.prev_of_pos(p);
    const int b = s.next_of_pos(p);
    e.legs = m.truck(a, j) + m.truck(j, b) - m.truck(a, dropping) - m.truck(dropping, b);
    e.replace = true;
  } else {
    e.legs = drop + ins.cost;
    e.insert = true;
    e.after = ins.after;
  }
  return e;
}

inline void enter(SearchState& s, int j, const Entry& e) {
  if (e.insert) s.insert_after(j, e.after);
}

inline void leave(SearchState& s, int i, int j, const Entry& e) {
  if (!s.served(i).empty()) return;
  if (e.replace) {
    s.replace_node(i, j);
  } else {
    s.remove_node(i);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Truck tour

inline std::optional<double> relocate_truck_node(SearchState& s) {
  const auto& m = s.mats();
  const int len = s.tour_size();
  for (int p = 1; p < len; ++p) {
    const int v = s.at(p);
    const int a = s.prev_of_pos(p);
    const int b = s.next_of_pos(p);
    const double gain = m.truck(a, v) + m.truck(v, b) - m.truck(a, b);
    for (int q = 0; q < len; ++q) {
      if (q == p || q == p - 1) continue;
      const int x = s.at(q);
      const int y = s.next_of_pos(q);
      const double delta = m.truck(x, v) + m.truck(v, y) - m.truck(x, y) - gain;
      if (detail::improves(delta)) {
        s.relocate(p, x);
        return delta;
      }
    }
  }
  return std::nullopt;
}

inline std::optional<double> swap_truck_node(SearchState& s) {
  const auto& m = s.mats();
  const int len = s.tour_size();
  for (int p = 1; p < len; ++p) {
    for (int q = p + 1; q < len; ++q) {
      const int a = s.at(p);
      const int b = s.at(q);
      const int pa = s.prev_of_pos(p);
      const int nb = s.next_of_pos(q);
      double delta;
      if (q == p + 1) {
        delta = m.truck(pa, b) + m.truck(a, nb) - m.truck(pa, a) - m.truck(b, nb);
      } else {
        const int na = s.next_of_pos(p);
        const int pb = s.prev_of_pos(q);
        delta = m.truck(pa, b) + m.truck(b, na) + m.truck(pb, a) + m.truck(a, nb) -
                m.truck(pa, a) - m.truck(a, na) - m.truck(pb, b) - m.truck(b, nb);
      }
      if (detail::improves(delta)) {
        s.swap_positions(p, q);
        return delta;
      }
    }
  }
  return std::nullopt;
}

inline std::optional<double> two_opt(SearchState& s) {
  const auto& m = s.mats();
  const int len = s.tour_size();
  for (int p = 1; p < len - 1; ++p) {
    const int a = s.prev_of_pos(p);
    const int b = s.at(p);
    for (int q = p + 1; q < len; ++q) {
      const int c = s.at(q);
      const int d = s.next_of_pos(q);
      const double delta = m.truck(a, c) + m.truck(b, d) - m.truck(a, b) - m.truck(c, d);
      if (detail::improves(delta)) {
        s.reverse(p, q);
        return delta;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Customer-to-node assignment (both variants; multi trip places every
// incoming customer on the least-loaded drone of its new node)

inline std::optional<double> swap_assignment1(SearchState& s) {
  const auto& m = s.mats();
  const int nc = s.instance().m();
  const bool multi = s.variant() == Variant::MultiTrip;

  // New wait at node i when customer `out` leaves and `in` arrives; the
  // drone chosen for `in` is written to `drone`.
  auto exchanged = [&](int i, int out, int in, int& drone) {
    if (!multi) return std::max(s.wait_without(i, out), s.trip(i, in));
    const int l = s.drone_of(out);
    const DroneLoad reduced{l, s.load(i, l) - s.trip(i, out)};
    const DroneLoad least = s.least_after(i, {reduced});
    drone = least.drone;
    if (least.drone == l) return s.max_load_after(i, {{l, reduced.load + s.trip(i, in)}});
    return s.max_load_after(i, {reduced, {least.drone, least.load + s.trip(i, in)}});
  };

  for (int k = 0; k < nc; ++k) {
    const int i = s.node_of(k);
    for (int k2 = k + 1; k2 < nc; ++k2) {
      const int i2 = s.node_of(k2);
      if (i2 == i || !m.in_range(i, k2) || !m.in_range(i2, k)) continue;
      int drone_at_i = -1;
      int drone_at_i2 = -1;
      const double delta = exchanged(i, k, k2, drone_at_i) - s.wait(i) +
                           exchanged(i2, k2, k, drone_at_i2) - s.wait(i2);
      if (detail::improves(delta)) {
        s.move_customer(k, i2, drone_at_i2);
        s.move_customer(k2, i, drone_at_i);
        return delta;
      }
    }
  }
  return std::nullopt;
}

inline std::optional<double> re_assignment1(SearchState& s) {
  const int nc = s.instance().m();
  const bool multi = s.variant() == Variant::MultiTrip;
  for (int k = 0; k < nc; ++k) {
    const int i = s.node_of(k);
    const bool drop = s.served(i).size() == 1;
    double removed;
    if (drop) {
      removed = -s.wait(i);
    } else if (!multi) {
      removed = s.wait_without(i, k) - s.wait(i);
    } else {
      const int l = s.drone_of(k);
      removed = s.max_load_after(i, {{l, s.load(i, l) - s.trip(i, k)}}) - s.wait(i);
    }
    for (int j : s.mats().launch_nodes(k)) {
      if (j == i) continue;
      const double t = s.trip(j, k);
      double added;
      int drone = -1;
      if (!s.visited(j)) {
        added = t;
        drone = multi ? 0 : -1;
      } else if (!multi) {
        if (static_cast<int>(s.served(j).size()) >= s.drones()) continue;
        added = std::max(0.0, t - s.furthest(j));
      } else {
        drone = s.least_drone(j);
        added = s.max_load_after(j, {{drone, s.load(j, drone) + t}}) - s.wait(j);
      }
      const detail::Entry e = detail::entry(s, j, drop ? i : -1);
      const double delta = removed + added + e.legs;
      if (detail::improves(delta)) {
        detail::enter(s, j, e);
        s.move_customer(k, j, drone);
        detail::leave(s, i, j, e);
        return delta;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Multi trip: drone assignment inside one node

inline std::optional<double> relocate_drone_assignment1(SearchState& s) {
  const int u = s.drones();
  for (int p = 1; p < s.tour_size(); ++p) {
    const int i = s.at(p);
    for (int k : s.served(i)) {
      const int l = s.drone_of(k);
      const double c = s.trip(i, k);
      for (int l2 = 0; l2 < u; ++l2) {
        if (l2 == l) continue;
        const double delta =
            s.max_load_after(i, {{l, s.load(i, l) - c}, {l2, s.load(i, l2) + c}}) - s.wait(i);
        if (detail::improves(delta)) {
          s.set_drone(k, l2);
          return delta;
        }
      }
    }
  }
  return std::nullopt;
}

inline std::optional<double> swap_drone_assignment1(SearchState& s) {
  for (int p = 1; p < s.tour_size(); ++p) {
    const int i = s.at(p);
    const auto served = s.served(i);
    for (std::size_t a = 0; a < served.size(); ++a) {
      for (std::size_t b = a + 1; b < served.size(); ++b) {
        const int k = served[a];
        const int k2 = served[b];
        const int l = s.drone_of(k);
        const int l2 = s.drone_of(k2);
        if (l == l2) continue;
        const double c = s.trip(i, k);
        const double c2 = s.trip(i, k2);
        const double delta =
            s.max_load_after(i, {{l, s.load(i, l) - c + c2}, {l2, s.load(i, l2) - c2 + c}}) -
            s.wait(i);
        if (detail::improves(delta)) {
          const std::pair<int, int> moves[] = {{k, l2}, {k2, l}};
          s.set_drones(i, moves);
          return delta;
        }
      }
    }
  }
  return std::nullopt;
}

// Two customers sharing a drone move together to another drone.
inline std::optional<double> relocate_drone_assignment2(SearchState& s) {
  const int u = s.drones();
  for (int p = 1; p < s.tour_size(); ++p) {
    const int i = s.at(p);
    const auto served = s.served(i);
    for (std::size_t a = 0; a < served.size(); ++a) {
      for (std::size_t b = a + 1; b < served.size(); ++b) {
        const int k = served[a];
        const int k2 = served[b];
        const int l = s.drone_of(k);
        if (s.drone_of(k2) != l) continue;
        const double c = s.trip(i, k) + s.trip(i, k2);
        for (int l2 = 0; l2 < u; ++l2) {
          if (l2 == l) continue;
          const double delta =
              s.max_load_after(i, {{l, s.load(i, l) - c}, {l2, s.load(i, l2) + c}}) - s.wait(i);
          if (detail::improves(delta)) {
            const std::pair<int, int> moves[] = {{k, l2}, {k2, l2}};
            s.set_drones(i, moves);
            return delta;
          }
        }
      }
    }
  }
  return std::nullopt;
}

// Two customers of one drone trade places with one customer of another.
inline std::optional<double> swap_drone_assignment2(SearchState& s) {
  for (int p = 1; p < s.tour_size(); ++p) {
    const int i = s.at(p);
    const auto served = s.served(i);
    for (std::size_t a = 0; a < served.size(); ++a) {
      for (std::size_t b = a + 1; b < served.size(); ++b) {
        const int k = served[a];
        const int k2 = served[b];
        const int l = s.drone_of(k);
        if (s.drone_of(k2) != l) continue;
        const double pair = s.trip(i, k) + s.trip(i, k2);
        for (int k3 : served) {
          const int l2 = s.drone_of(k3);
          if (l2 == l) continue;
          const double c3 = s.trip(i, k3);
          const double delta = s.max_load_after(i, {{l, s.load(i, l) - pair + c3},
                                                    {l2, s.load(i, l2) - c3 + pair}}) -
                               s.wait(i);
          if (detail::improves(delta)) {
            const std::pair<int, int> moves[] = {{k, l2}, {k2, l2}, {k3, l}};
            s.set_drones(i, moves);
            return delta;
          }
        }
      }
    }
  }
  return std::nullopt;
}

// Customers on three different drones rotate: k -> drone of k'' ,
// k' -> drone of k, k'' -> drone of k'.
inline std::optional<double> triangle_drone_assignment(SearchState& s) {
  for (int p = 1; p < s.tour_size(); ++p) {
    const int i = s.at(p);
    const auto served = s.served(i);
    for (std::size_t a = 0; a < served.size(); ++a) {
      const int k = served[a];
      const int l = s.drone_of(k);
      for (std::size_t b = a + 1; b < served.size(); ++b) {
        const int k2 = served[b];
        const int l2 = s.drone_of(k2);
        if (l2 == l) continue;
        for (std::size_t c = a + 1; c < served.size(); ++c) {
          const int k3 = served[c];
          const int l3 = s.drone_of(k3);
          if (c == b || l3 == l || l3 == l2) continue;
          const double t1 = s.trip(i, k);
          const double t2 = s.trip(i, k2);
          const double t3 = s.trip(i, k3);
          const double delta = s.max_load_after(i, {{l, s.load(i, l) - t1 + t2},
                                                    {l2, s.load(i, l2) - t2 + t3},
                                                    {l3, s.load(i, l3) - t3 + t1}}) -
                               s.wait(i);
          if (detail::improves(delta)) {
            const std::pair<int, int> moves[] = {{k2, l}, {k3, l2}, {k, l3}};
            s.set_drones(i, moves);
            return delta;
          }
        }
      }
    }
  }
  return std::nullopt;
}

/// Drone loads from placing trips, in increasing length, each on the
/// currently least-loaded drone (lowest id on ties).
inline std::vector<int> greedy_pack(std::span<const double> trips, int num_drones,
                                    std::vector<double>* loads_out = nullptr) {
  std::vector<std::size_t> order(trips.size());
  for (std::size_t x = 0; x < order.size(); ++x) order[x] = x;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return trips[a] < trips[b]; });
  std::vector<double> loads(num_drones, 0.0);
  std::vector<int> drone(trips.size(), 0);
  for (std::size_t x : order) {
    const int l = static_cast<int>(std::min_element(loads.begin(), loads.end()) - loads.begin());
    loads[l] += trips[x];
    drone[x] = l;
  }
  if (loads_out) *loads_out = std::move(loads);
  return drone;
}

inline std::optional<double> greedy_repack(SearchState& s) {
  const int u = s.drones();
  if (u < 2) return std::nullopt;
  std::vector<double> trips;
  std::vector<double> loads;
  for (int p = 1; p < s.tour_size(); ++p) {
    const int i = s.at(p);
    const auto served = s.served(i);
    if (served.size() < 2) continue;
    trips.clear();
    for (int k : served) trips.push_back(s.trip(i, k));
    const std::vector<int> drone = greedy_pack(trips, u, &loads);
    // Loads must be summed in customer order to match the evaluator exactly.
    std::fill(loads.begin(), loads.end(), 0.0);
    for (std::size_t x = 0; x < served.size(); ++x) loads[drone[x]] += trips[x];
    const double delta = *std::max_element(loads.begin(), loads.end()) - s.wait(i);
    if (detail::improves(delta)) {
      std::vector<std::pair<int, int>> moves;
      for (std::size_t x = 0; x < served.size(); ++x) moves.emplace_back(served[x], drone[x]);
      s.set_drones(i, moves);
      return delta;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Multi trip: moves across nodes

// Two customers of one node move together to another node.
inline std::optional<double> re_assignment2(SearchState& s) {
  const auto& m = s.mats();
  const int u = s.drones();
  for (int p = 1; p < s.tour_size(); ++p) {
    const int i = s.at(p);
    const auto served = s.served(i);
    const bool drop = served.size() == 2;
    for (std::size_t a = 0; a < served.size(); ++a) {
      for (std::size_t b = a + 1; b < served.size(); ++b) {
        const int k = served[a];
        const int k2 = served[b];
        const int l = s.drone_of(k);
        const int l2 = s.drone_of(k2);
        double removed;
        if (drop) {
          removed = -s.wait(i);
        } else if (l == l2) {
          removed = s.max_load_after(i, {{l, s.load(i, l) - s.trip(i, k) - s.trip(i, k2)}}) -
                    s.wait(i);
        } else {
          removed = s.max_load_after(i, {{l, s.load(i, l) - s.trip(i, k)},
                                         {l2, s.load(i, l2) - s.trip(i, k2)}}) -
                    s.wait(i);
        }
        for (int j : m.launch_nodes(k)) {
          if (j == i || !m.in_range(j, k2)) continue;
          const double t = s.trip(j, k);
          const double t2 = s.trip(j, k2);
          double added;
          int d1, d2;
          if (!s.visited(j)) {
            d1 = 0;
            d2 = u > 1 ? 1 : 0;
            added = u > 1 ? std::max(t, t2) : t + t2;
          } else {
            d1 = s.least_drone(j);
            const DroneLoad first{d1, s.load(j, d1) + t};
            const DroneLoad second = s.least_after(j, {first});
            d2 = second.drone;
            const double after = d2 == d1
                                     ? s.max_load_after(j, {{d1, first.load + t2}})
                                     : s.max_load_after(j, {first, {d2, second.load + t2}});
            added = after - s.wait(j);
          }
          const detail::Entry e = detail::entry(s, j, drop ? i : -1);
          const double delta = removed + added + e.legs;
          if (detail::improves(delta)) {
            detail::enter(s, j, e);
            s.move_customer(k, j, d1);
            s.move_customer(k2, j, d2);
            detail::leave(s, i, j, e);
            return delta;
          }
        }
      }
    }
  }
  return std::nullopt;
}

// k leaves node i for the least-loaded drone of another node; k' (same node,
// other drone) takes over k's drone.
inline std::optional<double> zigzag_assignment(SearchState& s) {
  const auto& m = s.mats();
  for (int p = 1; p < s.tour_size(); ++p) {
    const int i = s.at(p);
    const auto served = s.served(i);
    for (int k : served) {
      const int l = s.drone_of(k);
      for (int k2 : served) {
        const int l2 = s.drone_of(k2);
        if (l2 == l) continue;
        const double c = s.trip(i, k);
        const double c2 = s.trip(i, k2);
        const double removed =
            s.max_load_after(i, {{l, s.load(i, l) - c + c2}, {l2, s.load(i, l2) - c2}}) -
            s.wait(i);
        for (int j : m.launch_nodes(k)) {
          if (j == i) continue;
          const double t = s.trip(j, k);
          double added;
          int drone;
          if (!s.visited(j)) {
            drone = 0;
            added = t;
          } else {
            drone = s.least_drone(j);
            added = s.max_load_after(j, {{drone, s.load(j, drone) + t}}) - s.wait(j);
          }
          const detail::Entry e = detail::entry(s, j, -1);
          const double delta = removed + added + e.legs;
          if (detail::improves(delta)) {
            detail::enter(s, j, e);
            s.move_customer(k, j, drone);
            s.set_drone(k2, l);
            return delta;
          }
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

inline constexpr Operator kRelocateTruckNode{"relocateTruckNode", relocate_truck_node};
inline constexpr Operator kSwapTruckNode{"swapTruckNode", swap_truck_node};
inline constexpr Operator kTwoOpt{"2-opt", two_opt};
inline constexpr Operator kSwapAssignment1{"swapAssignment1", swap_assignment1};
inline constexpr Operator kReAssignment1{"reAssignment1", re_assignment1};
inline constexpr Operator kRelocateDrone1{"relocateDroneAssignment1", relocate_drone_assignment1};
inline constexpr Operator kSwapDrone1{"swapDroneAssignment1", swap_drone_assignment1};
inline constexpr Operator kRelocateDrone2{"relocateDroneAssignment2", relocate_drone_assignment2};
inline constexpr Operator kSwapDrone2{"swapDroneAssignment2", swap_drone_assignment2};
inline constexpr Operator kTriangle{"triangleDroneAssignment", triangle_drone_assignment};
inline constexpr Operator kGreedy{"greedyHeuristic", greedy_repack};
inline constexpr Operator kReAssignment2{"reAssignment2", re_assignment2};
inline constexpr Operator kZigzag{"zigzagAssignment", zigzag_assignment};

inline constexpr Operator kSingleTripSequence[] = {
    kRelocateTruckNode, kSwapTruckNode, kTwoOpt, kSwapAssignment1, kReAssignment1,
};

inline constexpr Operator kMultiTripSequence[] = {
    kRelocateTruckNode, kSwapTruckNode, kTwoOpt,    kRelocateDrone1, kSwapDrone1,
    kRelocateDrone2,    kSwapDrone2,    kTriangle,  kGreedy,         kReAssignment1,
    kReAssignment2,     kSwapAssignment1, kZigzag,
};

inline std::span<const Operator> sequence(Variant v) {
  if (v == Variant::SingleTrip) return kSingleTripSequence;
  return kMultiTripSequence;
}

/// Applies `op` until it finds no improving move. Returns true if it moved.
inline bool exhaust(const Operator& op, SearchState& s, const MoveTrace& trace = {}) {
  bool moved = false;
  while (auto delta = op.step(s)) {
    moved = true;
    if (trace) trace(op.name, *delta, s.objective());
  }
  return moved;
}

}  // namespace ls

/// Runs the operator sequence of the solution's variant until a full pass
/// makes no improving move.
inline Solution local_search(const Instance& inst, const TimeMatrices& mats, const Solution& sol,
                             const MoveTrace& trace = {}) {
  SearchState state(inst, mats, sol);
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto& op : ls::sequence(sol.variant)) {
      improved |= ls::exhaust(op, state, trace);
    }
  }
  return state.to_solution();
}

}  // namespace twoecho
