#pragma once

// LP-format export of the MILP formulations, and import of a solver's variable
// values back into a Solution.
//
// Variables: x_i_j (truck arc, node n is the depot copy), y_i (node visited),
// z_i_k (single trip) or z_l_i_k (multi trip), a_i (arrival), s_i (wait).

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoecho/model.hpp"

namespace twoecho {

struct MilpOptions {
  // Write one summed wait constraint per node instead of one per customer.
  bool literal_summed_wait = false;
};

class MilpParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

// Builds one constraint row and wraps it below the LP line-length limit.
class Row {
 public:
  Row& add(double coef, const std::string& var) {
    if (coef == 0.0) return *this;
    std::string term;
    if (terms_.empty()) {
      term = coef < 0 ? "- " : "";
    } else {
      term = coef < 0 ? " - " : " + ";
    }
    const double mag = std::abs(coef);
    if (mag != 1.0) term += num(mag) + " ";
    term += var;
    terms_.push_back(std::move(term));
    return *this;
  }

  void write(std::ostream& os, const std::string& name, const char* sense, double rhs) const {
    std::string line = " " + name + ": ";
    std::size_t width = line.size();
    for (const auto& t : terms_) {
      if (width + t.size() > 200) {
        os << line << "\n";
        line = "   ";
        width = line.size();
      }
      line += t;
      width += t.size();
    }
    if (terms_.empty()) line += " 0 x_empty";  // never produced by the writers below
    os << line << " " << sense << " " << num(rhs) << "\n";
  }

 private:
  std::vector<std::string> terms_;
};

inline std::string var(const char* p, int a) { return std::string(p) + std::to_string(a); }
inline std::string var(const char* p, int a, int b) {
  return std::string(p) + std::to_string(a) + "_" + std::to_string(b);
}
inline std::string var(const char* p, int a, int b, int c) {
  return std::string(p) + std::to_string(a) + "_" + std::to_string(b) + "_" + std::to_string(c);
}

inline void write_list(std::ostream& os, const std::vector<std::string>& names) {
  std::size_t width = 0;
  for (const auto& v : names) {
    if (width + v.size() > 200) {
      os << "\n";
      width = 0;
    }
    os << " " << v;
    width += v.size() + 1;
  }
  os << "\n";
}

}  // namespace detail

/// Writes the routing model. `big_m` must bound the optimum (a GRASP
/// objective is the usual choice).
inline void export_milp(const Instance& inst, const TimeMatrices& mats, Variant variant,
                        double big_m, std::ostream& os, const MilpOptions& opts = {}) {
  using detail::Row;
  using detail::var;
  const int n = inst.n();
  const int copy = n;
  const int u = inst.num_drones;
  const bool multi = variant == Variant::MultiTrip;

  os << "\\ two-echelon truck-and-drones routing, " << (multi ? "multi" : "single")
     << " trip, instance " << inst.name << "\n";
  os << "\\ nodes 0.." << n - 1 << ", depot copy " << copy << ", big M " << detail::num(big_m)
     << "\n";
  os << "Minimize\n obj: " << var("a_", copy) << "\nSubject To\n";

  {
    Row r;
    for (int j = 1; j <= copy; ++j) r.add(1, var("x_", 0, j));
    r.write(os, "depot_out", "=", 1);
  }
  {
    Row r;
    for (int i = 1; i <= copy; ++i) r.add(1, var("x_", i, 0));
    r.write(os, "depot_in", "=", 0);
  }
  {
    Row r;
    for (int i = 0; i < n; ++i) r.add(1, var("x_", i, copy));
    r.write(os, "copy_in", "=", 1);
  }
  {
    Row r;
    for (int j = 0; j < n; ++j) r.add(1, var("x_", copy, j));
    r.write(os, "copy_out", "=", 0);
  }
  for (int j = 1; j < n; ++j) {
    Row r;
    for (int i = 0; i < n; ++i) {
      if (i != j) r.add(1, var("x_", i, j));
    }
    r.add(-1, var("y_", j));
    r.write(os, var("visit_", j), "=", 0);
  }
  for (int i = 1; i < n; ++i) {
    Row r;
    for (int j = 0; j < n; ++j) {
      if (j != i) r.add(1, var("x_", j, i));
    }
    for (int j = 0; j <= copy; ++j) {
      if (j != i) r.add(-1, var("x_", i, j));
    }
    r.write(os, var("flow_", i), "=", 0);
  }

  for (int i = 1; i < n; ++i) {
    const auto reach = mats.reachable_customers(i);
    if (!multi) {
      for (int k : reach) {
        Row().add(1, var("z_", i, k)).add(-1, var("y_", i)).write(os, var("launch_", i, k), "<=", 0);
      }
    } else {
      for (int l = 0; l < u; ++l) {
        for (int k : reach) {
          Row()
              .add(1, var("z_", l, i, k))
              .add(-1, var("y_", i))
              .write(os, "launch_" + std::to_string(l) + "_" + std::to_string(i) + "_" +
                             std::to_string(k),
                     "<=", 0);
        }
      }
    }
    Row used;
    for (int l = 0; l < (multi ? u : 1); ++l) {
      for (int k : reach) used.add(1, multi ? var("z_", l, i, k) : var("z_", i, k));
    }
    used.add(-1, var("y_", i));
    used.write(os, var("used_", i), ">=", 0);
  }

  for (int k = 0; k < inst.m(); ++k) {
    Row r;
    for (int l = 0; l < (multi ? u : 1); ++l) {
      for (int i : mats.launch_nodes(k)) r.add(1, multi ? var("z_", l, i, k) : var("z_", i, k));
    }
    r.write(os, var("serve_", k), "=", 1);
  }

  if (!multi) {
    for (int i = 1; i < n; ++i) {
      const auto reach = mats.reachable_customers(i);
      if (reach.empty()) continue;
      Row r;
      for (int k : reach) r.add(1, var("z_", i, k));
      r.write(os, var("cap_", i), "<=", u);
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 1; j <= copy; ++j) {
      if (j == i) continue;
      const double t = j == copy ? mats.truck(i, 0) : mats.truck(i, j);
      Row()
          .add(1, var("a_", j))
          .add(-1, var("a_", i))
          .add(-1, var("s_", i))
          .add(-(t + big_m), var("x_", i, j))
          .write(os, var("time_", i, j), ">=", -big_m);
    }
  }
  for (int i = 1; i < n; ++i) {
    Row().add(1, var("a_", i)).add(-big_m, var("y_", i)).write(os, var("idle_", i), "<=", 0);
  }

  for (int i = 1; i < n; ++i) {
    const auto reach = mats.reachable_customers(i);
    if (reach.empty()) continue;
    if (multi) {
      for (int l = 0; l < u; ++l) {
        Row r;
        r.add(1, var("s_", i));
        for (int k : reach) r.add(-mats.round_trip(i, k), var("z_", l, i, k));
        r.write(os, var("wait_", i, l), ">=", 0);
      }
    } else if (opts.literal_summed_wait) {
      Row r;
      r.add(1, var("s_", i));
      for (int k : reach) r.add(-mats.round_trip(i, k), var("z_", i, k));
      r.write(os, var("wait_", i), ">=", 0);
    } else {
      for (int k : reach) {
        Row()
            .add(1, var("s_", i))
            .add(-mats.round_trip(i, k), var("z_", i, k))
            .write(os, var("wait_", i, k), ">=", 0);
      }
    }
  }

  os << "Bounds\n";
  for (int i = 0; i <= copy; ++i) os << " " << var("a_", i) << " >= 0\n";
  for (int i = 0; i < n; ++i) os << " " << var("s_", i) << " >= 0\n";

  std::vector<std::string> bin;
  for (int i = 0; i <= copy; ++i) {
    for (int j = 0; j <= copy; ++j) {
      if (i != j) bin.push_back(var("x_", i, j));
    }
  }
  for (int i = 1; i < n; ++i) bin.push_back(var("y_", i));
  for (int l = 0; l < (multi ? u : 1); ++l) {
    for (int i = 1; i < n; ++i) {
      for (int k : mats.reachable_customers(i)) {
        bin.push_back(multi ? var("z_", l, i, k) : var("z_", i, k));
      }
    }
  }
  os << "Binaries\n";
  detail::write_list(os, bin);
  os << "End\n";
}

/// Minimum per-node drone count as a MILP.
inline void export_u_min_model(const Instance& inst, const TimeMatrices& mats, std::ostream& os) {
  using detail::Row;
  using detail::var;
  os << "\\ minimum drones per node, instance " << inst.name << "\n";
  os << "Minimize\n obj: u\nSubject To\n";
  for (int k = 0; k < inst.m(); ++k) {
    Row r;
    for (int i : mats.launch_nodes(k)) r.add(1, var("z_", i, k));
    r.write(os, var("serve_", k), "=", 1);
  }
  std::vector<std::string> bin;
  for (int i = 1; i < inst.n(); ++i) {
    const auto reach = mats.reachable_customers(i);
    if (reach.empty()) continue;
    Row r;
    for (int k : reach) {
      r.add(1, var("z_", i, k));
      bin.push_back(var("z_", i, k));
    }
    r.add(-1, "u");
    r.write(os, var("cap_", i), "<=", 0);
  }
  os << "Bounds\n u >= 0\nGenerals\n u\nBinaries\n";
  detail::write_list(os, bin);
  os << "End\n";
}

/// Reads "name = value" lines (also "name value"; '#' and '\' start comments).
/// Variables not listed are zero. Binary variables must be 0 or 1 within 1e-6.
inline Solution import_milp_solution(std::istream& is, const Instance& inst,
                                     const TimeMatrices& mats, Variant variant) {
  const int n = inst.n();
  const int copy = n;
  const bool multi = variant == Variant::MultiTrip;
  std::vector<int> succ(n + 1, -1);
  Solution sol;
  sol.variant = variant;
  sol.assign.assign(inst.m(), -1);
  if (multi) sol.drone_of.assign(inst.m(), -1);
  std::vector<int> seen_assign(inst.m(), 0);

  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto c = line.find_first_of("#\\"); c != std::string::npos) line.resize(c);
    for (char& ch : line) {
      if (ch == '=') ch = ' ';
    }
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    std::string value_text;
    if (!(ls >> value_text)) {
      throw MilpParseError("line " + std::to_string(lineno) + ": missing value for " + name);
    }
    double value;
    try {
      std::size_t used = 0;
      value = std::stod(value_text, &used);
      if (used != value_text.size()) throw std::invalid_argument(value_text);
    } catch (const std::exception&) {
      throw MilpParseError("line " + std::to_string(lineno) + ": bad value '" + value_text +
                           "' for " + name);
    }

    std::vector<int> idx;
    const std::string prefix = name.substr(0, name.find('_'));
    {
      std::string rest = name.find('_') == std::string::npos ? "" : name.substr(name.find('_') + 1);
      std::istringstream parts(rest);
      std::string part;
      while (std::getline(parts, part, '_')) {
        try {
          std::size_t used = 0;
          idx.push_back(std::stoi(part, &used));
          if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
          throw MilpParseError("line " + std::to_string(lineno) + ": bad variable name " + name);
        }
      }
    }

    const bool binary = prefix == "x" || prefix == "y" || prefix == "z";
    if (!binary) continue;  // a_, s_, u are implied by the routing decision
    bool one;
    if (std::abs(value) <= 1e-6) {
      one = false;
    } else if (std::abs(value - 1.0) <= 1e-6) {
      one = true;
    } else {
      throw MilpParseError("fractional value " + value_text + " for binary variable " + name);
    }
    if (!one) continue;

    auto bad = [&] { throw MilpParseError("line " + std::to_string(lineno) + ": unknown variable " + name); };
    if (prefix == "x") {
      if (idx.size() != 2 || idx[0] < 0 || idx[0] > copy || idx[1] < 0 || idx[1] > copy) bad();
      if (succ[idx[0]] >= 0) {
        throw MilpParseError("node " + std::to_string(idx[0]) + " has two outgoing arcs");
      }
      succ[idx[0]] = idx[1];
    } else if (prefix == "z") {
      int l = 0, i, k;
      if (multi) {
        if (idx.size() != 3) bad();
        l = idx[0];
        i = idx[1];
        k = idx[2];
      } else {
        if (idx.size() != 2) bad();
        i = idx[0];
        k = idx[1];
      }
      if (k < 0 || k >= inst.m() || i < 0 || i >= n) bad();
      ++seen_assign[k];
      sol.assign[k] = i;
      if (multi) sol.drone_of[k] = l;
    }
  }

  sol.tour.push_back(0);
  for (int cur = succ[0], steps = 0; cur != copy; cur = succ[cur], ++steps) {
    if (cur < 0 || cur == 0 || steps > n) {
      throw MilpParseError("x values do not form a path from the depot to its copy");
    }
    sol.tour.push_back(cur);
  }
  std::vector<Violation> violations;
  for (int k = 0; k < inst.m(); ++k) {
    if (seen_assign[k] > 1) violations.push_back({ViolationKind::Unassigned, k, sol.assign[k]});
  }
  if (!violations.empty()) throw InfeasibleSolution(std::move(violations));
  evaluate_into(sol, inst, mats);  // throws InfeasibleSolution
  return sol;
}

}  // namespace twoecho
