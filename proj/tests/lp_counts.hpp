#pragma once

// Constraint tallies for the LP writer, from the instance geometry alone, and
// a reader that counts the rows the writer actually produced.

#include <cctype>
#include <map>
#include <sstream>
#include <string>

#include "oracle.hpp"

namespace lp_counts {

using Tally = std::map<std::string, long long>;

struct Shape {
  long long nodes = 0;      // truck nodes, depot included
  long long customers = 0;
  long long drones = 0;
  long long reach_sum = 0;  // sum over non-depot nodes of |W_i|
  long long reach_nodes = 0;  // non-depot nodes with W_i non-empty
};

inline Shape shape(const twoecho::Instance& inst) {
  Shape s;
  s.nodes = inst.n();
  s.customers = inst.m();
  s.drones = inst.num_drones;
  for (int i = 1; i < inst.n(); ++i) {
    long long w = 0;
    for (int k = 0; k < inst.m(); ++k) w += oracle::reachable(inst, i, k) ? 1 : 0;
    s.reach_sum += w;
    s.reach_nodes += w > 0 ? 1 : 0;
  }
  return s;
}

inline Tally routing_model(const Shape& s, bool multi, bool literal_summed_wait = false) {
  const long long n = s.nodes;
  Tally t{
      {"depot_out", 1}, {"depot_in", 1},    {"copy_in", 1},
      {"copy_out", 1},  {"visit", n - 1},   {"flow", n - 1},
      {"used", n - 1},  {"serve", s.customers}, {"time", n + (n - 1) * (n - 1)},
      {"idle", n - 1},
  };
  if (multi) {
    t["launch"] = s.drones * s.reach_sum;
    t["wait"] = s.drones * s.reach_nodes;
  } else {
    t["launch"] = s.reach_sum;
    t["cap"] = s.reach_nodes;
    t["wait"] = literal_summed_wait ? s.reach_nodes : s.reach_sum;
  }
  for (auto it = t.begin(); it != t.end();) {
    it = it->second == 0 ? t.erase(it) : std::next(it);
  }
  return t;
}

inline Tally drone_model(const Shape& s) {
  Tally t{{"serve", s.customers}, {"cap", s.reach_nodes}};
  for (auto it = t.begin(); it != t.end();) {
    it = it->second == 0 ? t.erase(it) : std::next(it);
  }
  return t;
}

/// Rows per family in an LP text; the family is the row name without its
/// trailing "_<index>" parts.
inline Tally count_rows(const std::string& lp) {
  Tally t;
  std::istringstream in(lp);
  std::string line;
  bool in_rows = false;
  while (std::getline(in, line)) {
    if (line == "Subject To") {
      in_rows = true;
      continue;
    }
    if (line == "Bounds" || line == "Binaries" || line == "Generals" || line == "End") {
      in_rows = false;
      continue;
    }
    if (!in_rows || line.size() < 2 || line[0] != ' ' || line[1] == ' ') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string name = line.substr(1, colon - 1);
    for (;;) {
      const auto us = name.rfind('_');
      if (us == std::string::npos || us + 1 == name.size()) break;
      bool digits = true;
      for (std::size_t c = us + 1; c < name.size(); ++c) {
        digits &= std::isdigit(static_cast<unsigned char>(name[c])) != 0;
      }
      if (!digits) break;
      name.resize(us);
    }
    ++t[name];
  }
  return t;
}

}  // namespace lp_counts
