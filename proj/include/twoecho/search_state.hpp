#pragma once

// Mutable working copy of a solution used by the local search, with the
// caches that make move evaluation constant time:
//   single trip: furthest and second-furthest round trip per visited node;
//   multi trip:  per-drone loads and the drones ordered by load, giving the
//                largest, second-largest and least-loaded drone directly;
//   both:        best insertion arc for every unvisited node.

#include <algorithm>
#include <cassert>
#include <initializer_list>
#include <span>
#include <vector>

#include "twoecho/model.hpp"

namespace twoecho {

struct DroneLoad {
  int drone = -1;
  double load = 0.0;
};

struct Insertion {
  int after = -1;   // node preceding the insertion arc
  int before = -1;  // node following it (0 for the closing arc)
  double cost = 0.0;
};

/// Single trip: wait increase at a node whose longest trip is `furthest`
/// when a trip of length `trip` is added.
inline double delta_add_customer_single(double furthest, double trip) {
  return std::max(0.0, trip - furthest);
}

/// Single trip: wait decrease when a trip of length `trip` leaves a node with
/// longest and second-longest trips `furthest` and `second`.
inline double delta_remove_customer_single(double furthest, double second, double trip) {
  return trip < furthest ? 0.0 : furthest - second;
}

class SearchState {
 public:
  SearchState(const Instance& inst, const TimeMatrices& mats, const Solution& sol)
      : inst_(&inst), mats_(&mats), variant_(sol.variant), u_(inst.num_drones),
        tour_(sol.tour), pos_(inst.n(), -1), assign_(sol.assign),
        served_(inst.n()), tf_(inst.n(), 0.0), ts_(inst.n(), 0.0), wait_(inst.n(), 0.0),
        insertion_(inst.n()) {
    if (variant_ == Variant::MultiTrip) {
      drone_of_ = sol.drone_of;
      loads_.assign(static_cast<std::size_t>(inst.n()) * u_, 0.0);
      order_.resize(static_cast<std::size_t>(inst.n()) * u_);
    }
    for (int k = 0; k < inst.m(); ++k) served_[assign_[k]].push_back(k);
    for (int i = 0; i < inst.n(); ++i) refresh_node(i);
    tour_changed();
  }

  const Instance& instance() const { return *inst_; }
  const TimeMatrices& mats() const { return *mats_; }
  Variant variant() const { return variant_; }
  int drones() const { return u_; }

  const std::vector<int>& tour() const { return tour_; }
  int tour_size() const { return static_cast<int>(tour_.size()); }
  int at(int p) const { return tour_[p]; }
  int position(int node) const { return pos_[node]; }
  bool visited(int node) const { return pos_[node] >= 0; }
  int prev_of_pos(int p) const { return tour_[p - 1]; }
  int next_of_pos(int p) const { return p + 1 < tour_size() ? tour_[p + 1] : 0; }

  int node_of(int k) const { return assign_[k]; }
  int drone_of(int k) const { return drone_of_[k]; }
  std::span<const int> served(int i) const { return served_[i]; }
  double trip(int i, int k) const { return mats_->round_trip(i, k); }
  double wait(int i) const { return wait_[i]; }
  double travel_time() const { return travel_; }

  double objective() const {
    double w = 0.0;
    for (int v : tour_) w += wait_[v];
    return travel_ + w;
  }

  // -- single-trip cache -----------------------------------------------------

  double furthest(int i) const { return tf_[i]; }
  double second_furthest(int i) const { return ts_[i]; }

  /// Wait at i once customer k (served there) is gone.
  double wait_without(int i, int k) const {
    return trip(i, k) < tf_[i] ? tf_[i] : ts_[i];
  }

  // -- multi-trip cache ------------------------------------------------------

  double load(int i, int l) const { return loads_[slot(i, l)]; }
  int largest_drone(int i) const { return order_[slot(i, 0)]; }
  int second_largest_drone(int i) const { return u_ > 1 ? order_[slot(i, 1)] : -1; }
  /// Least-loaded drone; ties go to the lowest id.
  int least_drone(int i) const { return order_[slot(i, u_ - 1)]; }

  /// Node wait if the listed drones took the given loads. O(|changes|).
  double max_load_after(int i, std::initializer_list<DroneLoad> changes) const {
    double best = 0.0;
    for (const auto& c : changes) best = std::max(best, c.load);
    for (int r = 0; r < u_; ++r) {
      const int l = order_[slot(i, r)];
      if (!contains(changes, l)) {
        best = std::max(best, loads_[slot(i, l)]);
        break;
      }
    }
    return best;
  }

  /// Least-loaded drone if the listed drones took the given loads.
  DroneLoad least_after(int i, std::initializer_list<DroneLoad> changes) const {
    DroneLoad best{-1, 0.0};
    auto better = [&](int l, double v) {
      return best.drone < 0 || v < best.load || (v == best.load && l < best.drone);
    };
    for (const auto& c : changes) {
      if (better(c.drone, c.load)) best = c;
    }
    for (int r = u_ - 1; r >= 0; --r) {
      const int l = order_[slot(i, r)];
      if (!contains(changes, l)) {
        if (better(l, loads_[slot(i, l)])) best = {l, loads_[slot(i, l)]};
        break;
      }
    }
    return best;
  }

  // -- unvisited-node insertion cache ---------------------------------------

  const Insertion& best_insertion(int j) {
    if (insertion_dirty_) rebuild_insertions();
    return insertion_[j];
  }

  // -- mutations -------------------------------------------------------------

  /// Moves the node at position p to just after `after` (another tour node).
  void relocate(int p, int after) {
    const int v = tour_[p];
    tour_.erase(tour_.begin() + p);
    const auto it = std::find(tour_.begin(), tour_.end(), after);
    tour_.insert(it + 1, v);
    tour_changed();
  }

  void swap_positions(int p, int q) {
    std::swap(tour_[p], tour_[q]);
    tour_changed();
  }

  /// Reverses tour positions [p, q].
  void reverse(int p, int q) {
    std::reverse(tour_.begin() + p, tour_.begin() + q + 1);
    tour_changed();
  }

  void insert_after(int j, int after) {
    tour_.insert(tour_.begin() + pos_[after] + 1, j);
    tour_changed();
  }

  /// Puts unvisited j at the tour position of visited i (i must serve nobody).
  void replace_node(int i, int j) {
    tour_[pos_[i]] = j;
    tour_changed();
  }

  void remove_node(int i) {
    assert(served_[i].empty());
    tour_.erase(tour_.begin() + pos_[i]);
    tour_changed();
  }

  /// Reassigns customer k; `drone` is ignored for single trip.
  void move_customer(int k, int to, int drone = -1) {
    const int from = assign_[k];
    auto& list = served_[from];
    list.erase(std::find(list.begin(), list.end(), k));
    served_[to].push_back(k);
    assign_[k] = to;
    if (variant_ == Variant::MultiTrip) drone_of_[k] = drone;
    refresh_node(from);
    if (to != from) refresh_node(to);
  }

  void set_drone(int k, int drone) {
    drone_of_[k] = drone;
    refresh_node(assign_[k]);
  }

  /// Sets several drone ids at once (all customers of the same node).
  void set_drones(int i, std::span<const std::pair<int, int>> customer_drone) {
    for (auto [k, l] : customer_drone) drone_of_[k] = l;
    refresh_node(i);
  }

  Solution to_solution() const {
    Solution s;
    s.variant = variant_;
    s.tour = tour_;
    s.assign = assign_;
    s.drone_of = drone_of_;
    evaluate_into(s, *inst_, *mats_);
    return s;
  }

  /// True when every cache equals a from-scratch recomputation.
  bool caches_consistent() const {
    SearchState fresh(*inst_, *mats_, to_raw());
    for (int i = 0; i < inst_->n(); ++i) {
      if (wait_[i] != fresh.wait_[i] || tf_[i] != fresh.tf_[i] || ts_[i] != fresh.ts_[i]) return false;
      if (variant_ == Variant::MultiTrip) {
        for (int l = 0; l < u_; ++l) {
          if (loads_[slot(i, l)] != fresh.loads_[slot(i, l)]) return false;
        }
        if (largest_drone(i) != fresh.largest_drone(i) || least_drone(i) != fresh.least_drone(i)) {
          return false;
        }
      }
    }
    return travel_ == fresh.travel_;
  }

 private:
  std::size_t slot(int i, int l) const { return static_cast<std::size_t>(i) * u_ + l; }

  static bool contains(std::initializer_list<DroneLoad> changes, int l) {
    for (const auto& c : changes) {
      if (c.drone == l) return true;
    }
    return false;
  }

  Solution to_raw() const {
    Solution s;
    s.variant = variant_;
    s.tour = tour_;
    s.assign = assign_;
    s.drone_of = drone_of_;
    return s;
  }

  // Recomputes the node caches from the customers it serves.
  void refresh_node(int i) {
    auto& list = served_[i];
    std::sort(list.begin(), list.end());
    if (variant_ == Variant::SingleTrip) {
      double f = 0.0, s = 0.0;
      for (int k : list) {
        const double t = trip(i, k);
        if (t >= f) {
          s = f;
          f = t;
        } else if (t > s) {
          s = t;
        }
      }
      tf_[i] = f;
      ts_[i] = s;
      wait_[i] = f;
      return;
    }
    double* l = &loads_[slot(i, 0)];
    std::fill(l, l + u_, 0.0);
    for (int k : list) l[drone_of_[k]] += trip(i, k);
    int* ord = &order_[slot(i, 0)];
    for (int d = 0; d < u_; ++d) ord[d] = d;
    // Descending load, ties by descending id so the back is the lowest-id minimum.
    std::sort(ord, ord + u_, [&](int a, int b) { return l[a] != l[b] ? l[a] > l[b] : a > b; });
    wait_[i] = l[ord[0]];
  }

  void tour_changed() {
    std::fill(pos_.begin(), pos_.end(), -1);
    travel_ = 0.0;
    for (int p = 0; p < tour_size(); ++p) {
      pos_[tour_[p]] = p;
      travel_ += mats_->truck(tour_[p], next_of_pos(p));
    }
    insertion_dirty_ = true;
  }

  void rebuild_insertions() {
    for (int j = 1; j < inst_->n(); ++j) {
      if (visited(j)) continue;
      Insertion best;
      for (int p = 0; p < tour_size(); ++p) {
        const int a = tour_[p];
        const int b = next_of_pos(p);
        const double c = mats_->truck(a, j) + mats_->truck(j, b) - mats_->truck(a, b);
        if (best.after < 0 || c < best.cost) best = {a, b, c};
      }
      insertion_[j] = best;
    }
    insertion_dirty_ = false;
  }

  const Instance* inst_;
  const TimeMatrices* mats_;
  Variant variant_;
  int u_;

  std::vector<int> tour_;
  std::vector<int> pos_;
  double travel_ = 0.0;

  std::vector<int> assign_;
  std::vector<int> drone_of_;
  std::vector<std::vector<int>> served_;

  std::vector<double> tf_;
  std::vector<double> ts_;
  std::vector<double> wait_;
  std::vector<double> loads_;
  std::vector<int> order_;

  std::vector<Insertion> insertion_;
  bool insertion_dirty_ = true;
};

}  // namespace twoecho
