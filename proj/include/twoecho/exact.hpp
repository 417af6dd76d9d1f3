#pragma once

// Exhaustive solver for desk-size instances. For every set S of visited
// nodes the truck tour is solved by Held-Karp and the customer partition over
// S by a subset DP whose per-node cost is the exact wait (max trip for single
// trip, optimal min-max packing of the trips onto u drones for multi trip).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoecho/model.hpp"
#include "twoecho/tsp.hpp"

namespace twoecho {

struct ExactLimits {
  int max_truck_nodes = 8;  // depot included
  int max_customers = 8;
  int max_drones = 4;
};

class ExactTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactResult {
  Solution solution;
  double objective = 0.0;
  long long subsets_examined = 0;  // every visited set was examined
};

/// Minimum over all ways of splitting `trips` onto `drones` identical drones
/// of the largest per-drone sum. Writes the optimal drone per trip if asked.
inline double min_makespan(std::span<const double> trips, int drones,
                           std::vector<int>* assignment = nullptr) {
  const int c = static_cast<int>(trips.size());
  if (c == 0) {
    if (assignment) assignment->clear();
    return 0.0;
  }
  std::vector<double> loads(drones, 0.0);
  std::vector<int> cur(c, 0), best_assign(c, 0);
  double best = std::numeric_limits<double>::infinity();

  // Trips are placed in order; trip x may open at most one new drone, so each
  // partition is generated once (drones are interchangeable).
  auto rec = [&](auto&& self, int x, int opened, double peak) -> void {
    if (peak >= best) return;
    if (x == c) {
      best = peak;
      best_assign = cur;
      return;
    }
    const int limit = std::min(opened + 1, drones);
    for (int l = 0; l < limit; ++l) {
      loads[l] += trips[x];
      cur[x] = l;
      self(self, x + 1, std::max(opened, l + 1), std::max(peak, loads[l]));
      loads[l] -= trips[x];
    }
  };
  rec(rec, 0, 0, 0.0);
  if (assignment) *assignment = best_assign;
  return best;
}

namespace detail {

inline std::vector<int> bits_of(std::uint32_t mask) {
  std::vector<int> out;
  for (int b = 0; mask >> b; ++b) {
    if (mask >> b & 1) out.push_back(b);
  }
  return out;
}

}  // namespace detail

inline ExactResult solve_exact(const Instance& inst, const TimeMatrices& mats, Variant variant,
                               const ExactLimits& limits = {}) {
  const int n = inst.n();
  const int m = inst.m();
  const int u = inst.num_drones;
  if (n > limits.max_truck_nodes || m > limits.max_customers || u > limits.max_drones) {
    throw ExactTooLarge("exact solver refuses n=" + std::to_string(n) + ", m=" +
                        std::to_string(m) + ", u=" + std::to_string(u) + " (caps " +
                        std::to_string(limits.max_truck_nodes) + "/" +
                        std::to_string(limits.max_customers) + "/" +
                        std::to_string(limits.max_drones) + ")");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;

  // wait[i][mask]: exact wait at node i serving exactly `mask`.
  std::vector<std::vector<double>> wait(n, std::vector<double>(std::size_t{full} + 1, kInf));
  std::vector<std::uint32_t> reach(n, 0);
  for (int i = 1; i < n; ++i) {
    for (int k : mats.reachable_customers(i)) reach[i] |= std::uint32_t{1} << k;
    std::vector<double> trips;
    for (std::uint32_t sub = reach[i];; sub = (sub - 1) & reach[i]) {
      if (sub != 0) {
        trips.clear();
        for (int k : detail::bits_of(sub)) trips.push_back(mats.round_trip(i, k));
        if (variant == Variant::SingleTrip) {
          if (static_cast<int>(trips.size()) <= u) {
            wait[i][sub] = *std::max_element(trips.begin(), trips.end());
          }
        } else {
          wait[i][sub] = min_makespan(trips, u);
        }
      }
      if (sub == 0) break;
    }
  }

  auto dist = [&mats](int a, int b) { return mats.truck(a, b); };
  const HeldKarp<decltype(dist)> tours(n, dist);

  // Partition DP over the nodes of S. Returns the cost and, if asked, the
  // customer set given to each node of S.
  auto partition = [&](const std::vector<int>& nodes, std::vector<std::uint32_t>* share) {
    const std::size_t size = std::size_t{full} + 1;
    std::vector<std::vector<double>> g(nodes.size() + 1, std::vector<double>(size, kInf));
    std::vector<std::vector<std::uint32_t>> pick(nodes.size() + 1,
                                                 std::vector<std::uint32_t>(size, 0));
    g[0][0] = 0.0;
    for (std::size_t x = 0; x < nodes.size(); ++x) {
      const int i = nodes[x];
      for (std::uint32_t mask = 0; mask <= full; ++mask) {
        const std::uint32_t avail = mask & reach[i];
        for (std::uint32_t sub = avail; sub != 0; sub = (sub - 1) & avail) {
          const double prev = g[x][mask ^ sub];
          if (prev == kInf || wait[i][sub] == kInf) continue;
          const double v = prev + wait[i][sub];
          if (v < g[x + 1][mask]) {
            g[x + 1][mask] = v;
            pick[x + 1][mask] = sub;
          }
        }
      }
    }
    if (share && g[nodes.size()][full] < kInf) {
      share->assign(nodes.size(), 0);
      std::uint32_t mask = full;
      for (std::size_t x = nodes.size(); x > 0; --x) {
        (*share)[x - 1] = pick[x][mask];
        mask ^= pick[x][mask];
      }
    }
    return g[nodes.size()][full];
  };

  ExactResult result;
  double best = kInf;
  std::size_t best_set = 0;
  const std::size_t sets = std::size_t{1} << (n - 1);
  for (std::size_t set = 0; set < sets; ++set) {
    ++result.subsets_examined;
    std::vector<int> nodes;
    for (int b = 0; b < n - 1; ++b) {
      if (set >> b & 1) nodes.push_back(b + 1);
    }
    const double legs = tours.tour_cost(set);
    if (legs >= best) continue;
    const double total = legs + partition(nodes, nullptr);
    if (total < best) {
      best = total;
      best_set = set;
    }
  }
  if (best == kInf) throw InvalidInstance("exact: instance admits no feasible solution");

  Solution& sol = result.solution;
  sol.variant = variant;
  sol.tour = tours.tour(best_set);
  sol.assign.assign(m, -1);
  if (variant == Variant::MultiTrip) sol.drone_of.assign(m, 0);
  std::vector<int> nodes(sol.tour.begin() + 1, sol.tour.end());
  std::sort(nodes.begin(), nodes.end());
  std::vector<std::uint32_t> share;
  partition(nodes, &share);
  for (std::size_t x = 0; x < nodes.size(); ++x) {
    const std::vector<int> ks = detail::bits_of(share[x]);
    for (int k : ks) sol.assign[k] = nodes[x];
    if (variant == Variant::MultiTrip) {
      std::vector<double> trips;
      for (int k : ks) trips.push_back(mats.round_trip(nodes[x], k));
      std::vector<int> drone;
      min_makespan(trips, u, &drone);
      for (std::size_t y = 0; y < ks.size(); ++y) sol.drone_of[ks[y]] = drone[y];
    }
  }
  result.objective = evaluate_into(sol, inst, mats);
  return result;
}

}  // namespace twoecho
