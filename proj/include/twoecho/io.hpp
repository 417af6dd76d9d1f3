#pragma once

// JSON for instances, solutions and run reports. Unknown keys are ignored on
// read; output key order is fixed so equal objects serialize to equal bytes.

#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "twoecho/model.hpp"

namespace twoecho {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Variant parse_variant(const std::string& s) {
  if (s == "s" || s == "single") return Variant::SingleTrip;
  if (s == "m" || s == "multi") return Variant::MultiTrip;
  throw FormatError("unknown variant '" + s + "' (expected s, m, single or multi)");
}

namespace detail {

inline Json points_to_json(const std::vector<Point>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back({p.x, p.y});
  return a;
}

inline std::vector<Point> points_from_json(const Json& a, const char* what) {
  if (!a.is_array()) throw FormatError(std::string(what) + " must be an array of [x, y]");
  std::vector<Point> out;
  for (const auto& p : a) {
    if (!p.is_array() || p.size() != 2) throw FormatError(std::string(what) + ": bad point");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

// {"k": v} object over the given indices.
template <typename T>
Json index_map(const std::vector<T>& values, const std::vector<int>& indices) {
  Json o = Json::object();
  for (int i : indices) o[std::to_string(i)] = values[i];
  return o;
}

inline std::vector<int> int_map_from_json(const Json& o, int size, const char* what) {
  std::vector<int> out(size, -1);
  if (!o.is_object()) throw FormatError(std::string(what) + " must be an object");
  for (auto it = o.begin(); it != o.end(); ++it) {
    int key;
    try {
      key = std::stoi(it.key());
    } catch (const std::exception&) {
      throw FormatError(std::string(what) + ": bad key '" + it.key() + "'");
    }
    if (key < 0 || key >= size) {
      throw FormatError(std::string(what) + ": key " + it.key() + " out of range");
    }
    out[key] = it.value().get<int>();
  }
  return out;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(e.what());
  }
}

}  // namespace detail

inline Json to_json(const Instance& inst) {
  Json j;
  j["name"] = inst.name;
  j["d"] = inst.d;
  j["truck_speed"] = inst.truck_speed;
  j["drone_speed"] = inst.drone_speed;
  j["endurance"] = inst.endurance;
  j["num_drones"] = inst.num_drones;
  j["seed"] = inst.seed;
  j["rng"] = inst.rng_algorithm;
  j["truck_nodes"] = detail::points_to_json(inst.truck_nodes);
  j["customers"] = detail::points_to_json(inst.customers);
  return j;
}

inline Instance instance_from_json(const Json& j) {
  return detail::guarded([&] {
    Instance inst;
    inst.name = j.value("name", std::string{});
    inst.d = j.value("d", 0.0);
    inst.truck_speed = j.value("truck_speed", 40.0);
    inst.drone_speed = j.value("drone_speed", 40.0);
    inst.endurance = j.value("endurance", 0.5);
    inst.num_drones = j.value("num_drones", 1);
    inst.seed = j.value("seed", std::uint64_t{0});
    inst.rng_algorithm = j.value("rng", std::string{});
    if (!j.contains("truck_nodes")) throw FormatError("instance has no truck_nodes");
    inst.truck_nodes = detail::points_from_json(j.at("truck_nodes"), "truck_nodes");
    inst.customers = j.contains("customers")
                         ? detail::points_from_json(j.at("customers"), "customers")
                         : std::vector<Point>{};
    return inst;
  });
}

inline Json to_json(const Solution& sol) {
  Json j;
  j["variant"] = std::string(to_string(sol.variant));
  j["tour"] = sol.tour;
  std::vector<int> ks(sol.assign.size());
  for (std::size_t k = 0; k < ks.size(); ++k) ks[k] = static_cast<int>(k);
  j["assign"] = detail::index_map(sol.assign, ks);
  if (sol.variant == Variant::MultiTrip) {
    j["drone_of"] = detail::index_map(sol.drone_of, ks);
  } else {
    j["drone_of"] = nullptr;
  }
  j["objective"] = sol.objective;
  const bool cached = !sol.waits.empty() && !sol.arrivals.empty();
  j["waits"] = cached ? detail::index_map(sol.waits, sol.tour) : Json::object();
  j["arrivals"] = cached ? detail::index_map(sol.arrivals, sol.tour) : Json::object();
  return j;
}

/// Reads the decision part (variant, tour, assign, drone_of). Cached values
/// in the file are not trusted; call evaluate_into() to recompute them.
inline Solution solution_from_json(const Json& j, int num_customers) {
  return detail::guarded([&] {
    Solution sol;
    sol.variant = parse_variant(j.at("variant").get<std::string>());
    sol.tour = j.at("tour").get<std::vector<int>>();
    sol.assign = detail::int_map_from_json(j.at("assign"), num_customers, "assign");
    if (sol.variant == Variant::MultiTrip) {
      if (!j.contains("drone_of") || j.at("drone_of").is_null()) {
        throw FormatError("multi-trip solution needs drone_of");
      }
      sol.drone_of = detail::int_map_from_json(j.at("drone_of"), num_customers, "drone_of");
    }
    sol.objective = j.value("objective", 0.0);
    return sol;
  });
}

inline Json to_json(const RunReport& r) {
  Json j;
  j["instance"] = r.instance;
  j["variant"] = std::string(to_string(r.variant));
  j["num_drones"] = r.num_drones;
  j["drone_speed"] = r.drone_speed;
  j["visited_nodes"] = r.visited_nodes;
  j["objective"] = r.objective;
  j["wait_time"] = r.wait_time;
  j["travel_time"] = r.travel_time;
  j["gap_percent"] = r.gap_percent ? Json(*r.gap_percent) : Json(nullptr);
  j["iterations"] = r.iterations;
  j["failed_constructions"] = r.failed_constructions;
  j["wall_time"] = r.wall_time;
  return j;
}

inline RunReport report_from_json(const Json& j) {
  return detail::guarded([&] {
    RunReport r;
    r.instance = j.value("instance", std::string{});
    r.variant = parse_variant(j.value("variant", std::string("single")));
    r.num_drones = j.value("num_drones", 0);
    r.drone_speed = j.value("drone_speed", 0.0);
    r.visited_nodes = j.value("visited_nodes", 0);
    r.objective = j.value("objective", 0.0);
    r.wait_time = j.value("wait_time", 0.0);
    r.travel_time = j.value("travel_time", 0.0);
    if (j.contains("gap_percent") && !j.at("gap_percent").is_null()) {
      r.gap_percent = j.at("gap_percent").get<double>();
    }
    r.iterations = j.value("iterations", 0LL);
    r.failed_constructions = j.value("failed_constructions", 0LL);
    r.wall_time = j.value("wall_time", 0.0);
    return r;
  });
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
  if (!out) throw FormatError("write failed: " + path);
}

}  // namespace twoecho
