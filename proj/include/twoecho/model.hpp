#pragma once

// Domain types for the two-echelon truck-and-drones routing problem:
// instances, derived travel-time matrices, solutions and their exact
// evaluation / feasibility check.
//
// Units: distances in km, speeds in km/h, times in hours.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twoecho {

/// Tolerance used for time comparisons (hours).
inline constexpr double kTimeEps = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double manhattan(const Point& a, const Point& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

inline double euclidean(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

enum class Variant { SingleTrip, MultiTrip };

inline std::string_view to_string(Variant v) {
  return v == Variant::SingleTrip ? "single" : "multi";
}

class InvalidInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem data. truck_nodes[0] is the depot; a copy of it closes the tour.
struct Instance {
  std::string name;
  double d = 0.0;  // side of the square the points were drawn from
  std::vector<Point> truck_nodes;
  std::vector<Point> customers;
  double truck_speed = 40.0;
  double drone_speed = 40.0;
  double endurance = 0.5;  // max airborne hours per round trip
  int num_drones = 1;

  // Provenance of generated instances; zero / empty for hand-written ones.
  std::uint64_t seed = 0;
  std::string rng_algorithm;

  int n() const { return static_cast<int>(truck_nodes.size()); }
  int m() const { return static_cast<int>(customers.size()); }
};

/// Travel times derived from an Instance. Immutable once built.
class TimeMatrices {
 public:
  TimeMatrices() = default;

  explicit TimeMatrices(const Instance& inst)
      : n_(inst.n()), m_(inst.m()), endurance_(inst.endurance) {
    truck_.resize(static_cast<std::size_t>(n_) * n_);
    drone_.resize(static_cast<std::size_t>(n_) * m_);
    serve_.assign(static_cast<std::size_t>(n_) * m_, 0);
    by_node_.resize(n_);
    by_customer_.resize(m_);
    launch_.resize(m_);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        truck_[idx(i, j)] =
            manhattan(inst.truck_nodes[i], inst.truck_nodes[j]) / inst.truck_speed;
      }
      for (int k = 0; k < m_; ++k) {
        const double one_way = euclidean(inst.truck_nodes[i], inst.customers[k]) / inst.drone_speed;
        drone_[didx(i, k)] = one_way;
        if (2.0 * one_way <= inst.endurance + kTimeEps) {
          serve_[didx(i, k)] = 1;
          by_node_[i].push_back(k);
          by_customer_[k].push_back(i);
          if (i != 0) launch_[k].push_back(i);
        }
      }
    }
  }

  int n() const { return n_; }
  int m() const { return m_; }
  double endurance() const { return endurance_; }

  /// Truck travel time between truck nodes i and j.
  double truck(int i, int j) const { return truck_[idx(i, j)]; }
  /// One-way drone flight time from truck node i to customer k.
  double drone(int i, int k) const { return drone_[didx(i, k)]; }
  double round_trip(int i, int k) const { return 2.0 * drone_[didx(i, k)]; }
  /// True when a round trip i -> k -> i fits in the endurance.
  bool in_range(int i, int k) const { return serve_[didx(i, k)] != 0; }

  /// W_i: customers within range of truck node i.
  std::span<const int> reachable_customers(int i) const { return by_node_[i]; }
  /// V_k: truck nodes (depot included) within range of customer k.
  std::span<const int> reaching_nodes(int k) const { return by_customer_[k]; }
  /// V_k without the depot: nodes that may actually launch a drone to k.
  std::span<const int> launch_nodes(int k) const { return launch_[k]; }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
  std::size_t didx(int i, int k) const { return static_cast<std::size_t>(i) * m_ + k; }

  int n_ = 0;
  int m_ = 0;
  double endurance_ = 0.0;
  std::vector<double> truck_;
  std::vector<double> drone_;
  std::vector<char> serve_;
  std::vector<std::vector<int>> by_node_;
  std::vector<std::vector<int>> by_customer_;
  std::vector<std::vector<int>> launch_;
};

/// Throws InvalidInstance when the instance cannot admit any solution.
inline void validate(const Instance& inst, const TimeMatrices& mats) {
  auto fail = [&](const std::string& what) {
    throw InvalidInstance("instance '" + inst.name + "': " + what);
  };
  if (inst.truck_nodes.empty()) fail("no truck nodes (depot missing)");
  if (!(inst.truck_speed > 0.0)) fail("truck speed must be positive");
  if (inst.drone_speed < inst.truck_speed) fail("drone speed below truck speed");
  if (!(inst.endurance > 0.0)) fail("endurance must be positive");
  if (inst.num_drones < 1) fail("need at least one drone");
  auto finite = [](const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); };
  if (!std::all_of(inst.truck_nodes.begin(), inst.truck_nodes.end(), finite) ||
      !std::all_of(inst.customers.begin(), inst.customers.end(), finite)) {
    fail("non-finite coordinate");
  }
  for (int k = 0; k < inst.m(); ++k) {
    if (mats.launch_nodes(k).empty()) {
      fail("customer " + std::to_string(k) + " is out of range of every launch node");
    }
  }
}

inline void validate(const Instance& inst) { validate(inst, TimeMatrices(inst)); }

// ---------------------------------------------------------------------------
// Solutions

struct Solution {
  Variant variant = Variant::SingleTrip;
  std::vector<int> tour;      // tour[0] == 0; the return to the depot copy is implicit
  std::vector<int> assign;    // customer -> launching truck node, -1 if unassigned
  std::vector<int> drone_of;  // customer -> drone id (MultiTrip only, else empty)

  // Cached by evaluate_into(); indexed by truck node, zero for unvisited nodes.
  std::vector<double> waits;
  std::vector<double> arrivals;
  double objective = 0.0;
};

enum class ViolationKind {
  BadTour,           // empty, not starting at the depot, or unknown node id
  DuplicateVisit,    // a node appears twice in the tour
  SizeMismatch,      // assign / drone_of length differs from the customer count
  Unassigned,        // customer has no launching node
  DepotLaunch,       // customer assigned to the depot
  RangeViolation,    // round trip exceeds the endurance
  NodeNotVisited,    // customer assigned to a node the truck skips
  CapacityViolation, // single trip: more than u customers at a node
  BadDrone,          // multi trip: drone id outside 0..u-1
  IdleNode,          // visited non-depot node serves nobody
};

struct Violation {
  ViolationKind kind;
  int customer = -1;
  int node = -1;

  friend bool operator==(const Violation&, const Violation&) = default;

  std::string describe() const {
    auto c = [&] { return "customer " + std::to_string(customer); };
    auto v = [&] { return "node " + std::to_string(node); };
    switch (kind) {
      case ViolationKind::BadTour: return "malformed tour at " + v();
      case ViolationKind::DuplicateVisit: return v() + " visited more than once";
      case ViolationKind::SizeMismatch: return "assignment vector length mismatch";
      case ViolationKind::Unassigned: return c() + " is not assigned";
      case ViolationKind::DepotLaunch: return c() + " is launched from the depot";
      case ViolationKind::RangeViolation: return c() + " out of range of " + v();
      case ViolationKind::NodeNotVisited: return c() + " assigned to unvisited " + v();
      case ViolationKind::CapacityViolation: return v() + " exceeds the drone count";
      case ViolationKind::BadDrone: return c() + " has an invalid drone id";
      case ViolationKind::IdleNode: return v() + " is visited but serves no customer";
    }
    return "unknown violation";
  }
};

class InfeasibleSolution : public std::runtime_error {
 public:
  explicit InfeasibleSolution(std::vector<Violation> v)
      : std::runtime_error(summary(v)), violations_(std::move(v)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string summary(const std::vector<Violation>& v) {
    std::string s = "infeasible solution:";
    for (const auto& x : v) s += " [" + x.describe() + "]";
    return s;
  }
  std::vector<Violation> violations_;
};

/// Wait at a node with parallel single-trip drones: the longest round trip.
inline double node_wait_single(std::span<const double> trips, int num_drones) {
  if (static_cast<int>(trips.size()) > num_drones) {
    throw InfeasibleSolution({{ViolationKind::CapacityViolation}});
  }
  double w = 0.0;
  for (double t : trips) w = std::max(w, t);
  return w;
}

/// Wait at a node with multi-trip drones: the busiest drone's total flying time.
inline double node_wait_multi(std::span<const std::vector<double>> per_drone_trips) {
  double w = 0.0;
  for (const auto& trips : per_drone_trips) {
    double load = 0.0;
    for (double t : trips) load += t;
    w = std::max(w, load);
  }
  return w;
}

inline std::vector<Violation> check_feasibility(const Solution& sol, const Instance& inst,
                                                const TimeMatrices& mats) {
  std::vector<Violation> out;
  const int n = inst.n();
  const int m = inst.m();

  std::vector<char> visited(n, 0);
  if (sol.tour.empty() || sol.tour.front() != 0) {
    out.push_back({ViolationKind::BadTour, -1, sol.tour.empty() ? -1 : sol.tour.front()});
  }
  for (int v : sol.tour) {
    if (v < 0 || v >= n) {
      out.push_back({ViolationKind::BadTour, -1, v});
      continue;
    }
    if (visited[v]) out.push_back({ViolationKind::DuplicateVisit, -1, v});
    visited[v] = 1;
  }

  const bool multi = sol.variant == Variant::MultiTrip;
  if (static_cast<int>(sol.assign.size()) != m ||
      (multi && static_cast<int>(sol.drone_of.size()) != m)) {
    out.push_back({ViolationKind::SizeMismatch});
    return out;
  }

  std::vector<int> load(n, 0);
  for (int k = 0; k < m; ++k) {
    const int i = sol.assign[k];
    if (i < 0 || i >= n) {
      out.push_back({ViolationKind::Unassigned, k, i});
      continue;
    }
    if (i == 0) {
      out.push_back({ViolationKind::DepotLaunch, k, 0});
      continue;
    }
    if (!mats.in_range(i, k)) out.push_back({ViolationKind::RangeViolation, k, i});
    if (!visited[i]) out.push_back({ViolationKind::NodeNotVisited, k, i});
    if (multi && (sol.drone_of[k] < 0 || sol.drone_of[k] >= inst.num_drones)) {
      out.push_back({ViolationKind::BadDrone, k, i});
    }
    ++load[i];
  }
  for (int i = 1; i < n; ++i) {
    if (!multi && load[i] > inst.num_drones) {
      out.push_back({ViolationKind::CapacityViolation, -1, i});
    }
    if (visited[i] && load[i] == 0) out.push_back({ViolationKind::IdleNode, -1, i});
  }
  return out;
}

struct Evaluation {
  double objective = 0.0;    // arrival at the depot copy
  double travel_time = 0.0;  // T_t: sum of tour legs
  double wait_time = 0.0;    // T_d: sum of node waits
  std::vector<double> waits;
  std::vector<double> arrivals;
};

/// Recomputes waits, arrivals and the objective from scratch.
/// Throws InfeasibleSolution if check_feasibility reports anything.
inline Evaluation evaluate(const Solution& sol, const Instance& inst, const TimeMatrices& mats) {
  if (auto v = check_feasibility(sol, inst, mats); !v.empty()) {
    throw InfeasibleSolution(std::move(v));
  }
  const int n = inst.n();
  const int u = inst.num_drones;
  Evaluation ev;
  ev.waits.assign(n, 0.0);
  ev.arrivals.assign(n, 0.0);

  // Group trips per node (customer order) so the result does not depend on
  // how the assignment was produced.
  std::vector<std::vector<double>> trips(n);
  std::vector<std::vector<std::vector<double>>> drone_trips;
  if (sol.variant == Variant::MultiTrip) {
    drone_trips.assign(n, std::vector<std::vector<double>>(u));
  }
  for (int k = 0; k < inst.m(); ++k) {
    const int i = sol.assign[k];
    if (sol.variant == Variant::SingleTrip) {
      trips[i].push_back(mats.round_trip(i, k));
    } else {
      drone_trips[i][sol.drone_of[k]].push_back(mats.round_trip(i, k));
    }
  }
  for (int i = 1; i < n; ++i) {
    ev.waits[i] = sol.variant == Variant::SingleTrip ? node_wait_single(trips[i], u)
                                                     : node_wait_multi(drone_trips[i]);
  }

  double a = 0.0;
  for (std::size_t p = 0; p < sol.tour.size(); ++p) {
    const int here = sol.tour[p];
    const int next = p + 1 < sol.tour.size() ? sol.tour[p + 1] : 0;
    ev.arrivals[here] = here == 0 ? 0.0 : a;
    const double leg = mats.truck(here, next);
    ev.travel_time += leg;
    ev.wait_time += ev.waits[here];
    a += ev.waits[here] + leg;
  }
  ev.objective = a;
  return ev;
}

/// evaluate() and store the caches in the solution.
inline double evaluate_into(Solution& sol, const Instance& inst, const TimeMatrices& mats) {
  Evaluation ev = evaluate(sol, inst, mats);
  sol.waits = std::move(ev.waits);
  sol.arrivals = std::move(ev.arrivals);
  sol.objective = ev.objective;
  return sol.objective;
}

/// Number of truck nodes in the tour, depot included.
inline int visited_count(const Solution& sol) { return static_cast<int>(sol.tour.size()); }

/// Strict weak order used to break objective ties deterministically.
inline bool lexicographically_less(const Solution& a, const Solution& b) {
  if (a.tour != b.tour) return a.tour < b.tour;
  if (a.assign != b.assign) return a.assign < b.assign;
  return a.drone_of < b.drone_of;
}

/// One result row; mirrors the columns of the TSP-comparison table.
struct RunReport {
  std::string instance;
  Variant variant = Variant::SingleTrip;
  int num_drones = 0;
  double drone_speed = 0.0;
  int visited_nodes = 0;   // |V_t|
  double objective = 0.0;  // Obj
  double wait_time = 0.0;  // T_d
  double travel_time = 0.0;  // T_t
  std::optional<double> gap_percent;
  long long iterations = 0;
  long long failed_constructions = 0;
  double wall_time = 0.0;  // seconds
};

}  // namespace twoecho
