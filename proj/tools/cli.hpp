#pragma once

// Command-line front end. Kept in a header so the tests can drive it
// in-process; tools/twoecho.cpp is a thin main().

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twoecho/twoecho.hpp"

namespace twoecho::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

inline int default_threads() {
  if (const char* env = std::getenv("TWOECHO_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
    }
  }
  return 1;
}

// Upper bound on any arrival time of any feasible solution: every leg at most
// the longest leg out of its tail, every trip flown back to back.
inline double safe_big_m(const Instance& inst, const TimeMatrices& mats) {
  double legs = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    double longest = 0.0;
    for (int j = 0; j < inst.n(); ++j) longest = std::max(longest, mats.truck(i, j));
    legs += longest;
  }
  double trips = 0.0;
  for (int k = 0; k < inst.m(); ++k) {
    double longest = 0.0;
    for (int i : mats.launch_nodes(k)) longest = std::max(longest, mats.round_trip(i, k));
    trips += longest;
  }
  return legs + trips + 1.0;
}

struct Overrides {
  std::optional<int> drones;
  std::optional<double> drone_speed;

  void add_to(CLI::App* app) {
    app->add_option("--drones", drones, "Override the instance's drone count")
        ->check(CLI::PositiveNumber);
    app->add_option("--drone-speed", drone_speed, "Override the drone speed (km/h)")
        ->check(CLI::PositiveNumber);
  }
  void apply(Instance& inst) const {
    if (drones) inst.num_drones = *drones;
    if (drone_speed) inst.drone_speed = *drone_speed;
  }
};

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::vector<std::string> list_instances(const std::string& dir) {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truck-and-drones two-echelon routing solver"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  GenConfig gcfg;
  std::string gen_out;
  std::optional<int> gen_drones;
  bool coincident = false;
  gen->add_option("--d", gcfg.d, "Side of the square (km)")->check(CLI::PositiveNumber);
  gen->add_option("--n", gcfg.n_truck, "Truck nodes including the depot (total points with --coincident)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--m", gcfg.m_customers, "Customers")->check(CLI::NonNegativeNumber);
  gen->add_option("--drone-speed", gcfg.drone_speed, "Drone speed (km/h)")->check(CLI::PositiveNumber);
  gen->add_option("--truck-speed", gcfg.truck_speed, "Truck speed (km/h)")->check(CLI::PositiveNumber);
  gen->add_option("--endurance", gcfg.endurance, "Drone endurance (h)")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gcfg.seed, "Random seed");
  gen->add_option("--drones", gen_drones, "Drone count (default: minimum needed)")
      ->check(CLI::PositiveNumber);
  gen->add_flag("--coincident", coincident, "Truck nodes coincide with the customers");
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Run GRASP on an instance");
  std::string instance_path;
  std::string variant_text = "m";
  GraspConfig scfg;
  scfg.threads = default_threads();
  std::optional<double> time_limit;
  std::string sol_out, report_out;
  bool trace = false;
  Overrides solve_over;
  solve->add_option("instance", instance_path, "Instance JSON")->required();
  solve->add_option("--variant", variant_text, "s (single trip) or m (multi trip)")
      ->check(CLI::IsMember({"s", "m", "single", "multi"}));
  solve->add_option("--iters", scfg.n_max, "GRASP iterations")->check(CLI::PositiveNumber);
  solve->add_option("--seed", scfg.seed, "Random seed");
  solve->add_option("--threads", scfg.threads, "Worker threads (default $TWOECHO_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  solve->add_option("--time-limit", time_limit, "Wall-clock limit (s)")->check(CLI::PositiveNumber);
  solve->add_option("--out", sol_out, "Solution JSON (default: stdout)");
  solve->add_option("--report", report_out, "Report JSON");
  solve->add_flag("--trace", trace, "Print every accepted move to stderr");
  solve_over.add_to(solve);

  // exact
  auto* exact = app.add_subcommand("exact", "Solve a tiny instance to optimality");
  std::string exact_out;
  Overrides exact_over;
  exact->add_option("instance", instance_path, "Instance JSON")->required();
  exact->add_option("--variant", variant_text, "s or m")->check(CLI::IsMember({"s", "m", "single", "multi"}));
  exact->add_option("--out", exact_out, "Solution JSON (default: stdout)");
  exact_over.add_to(exact);

  // export-milp
  auto* milp = app.add_subcommand("export-milp", "Write the MILP model in LP format");
  std::optional<double> big_m;
  std::string milp_out;
  bool u_model = false, literal_wait = false;
  Overrides milp_over;
  milp->add_option("instance", instance_path, "Instance JSON")->required();
  milp->add_option("--variant", variant_text, "s or m")->check(CLI::IsMember({"s", "m", "single", "multi"}));
  milp->add_option("--big-m", big_m, "Big-M constant (default: a safe bound)")->check(CLI::PositiveNumber);
  milp->add_flag("--u-min-model", u_model, "Write the minimum-drone model instead");
  milp->add_flag("--literal-summed-wait", literal_wait,
                 "Single trip: one summed wait row per node (sum of trips, not max)");
  milp->add_option("--out", milp_out, "LP file (default: stdout)");
  milp_over.add_to(milp);

  // import-milp-solution
  auto* import = app.add_subcommand("import-milp-solution", "Turn solver variable values into a solution");
  std::string values_path, import_out;
  Overrides import_over;
  import->add_option("instance", instance_path, "Instance JSON")->required();
  import->add_option("values", values_path, "File of 'name = value' lines")->required();
  import->add_option("--variant", variant_text, "s or m")->check(CLI::IsMember({"s", "m", "single", "multi"}));
  import->add_option("--out", import_out, "Solution JSON (default: stdout)");
  import_over.add_to(import);

  // compare-tsp
  auto* cmp = app.add_subcommand("compare-tsp", "Multi-trip GRASP against the truck-only tour");
  std::vector<double> speeds{40, 50, 60, 70, 80};
  std::vector<int> fleets{2, 3, 4, 5};
  GraspConfig ccfg;
  ccfg.n_max = 50000;
  ccfg.threads = default_threads();
  std::string cmp_out;
  cmp->add_option("instance", instance_path, "Coincident instance JSON (see gen --coincident)")->required();
  cmp->add_option("--speeds", speeds, "Drone speeds")->delimiter(',');
  cmp->add_option("--drones", fleets, "Fleet sizes")->delimiter(',');
  cmp->add_option("--iters", ccfg.n_max, "GRASP iterations")->check(CLI::PositiveNumber);
  cmp->add_option("--seed", ccfg.seed, "Random seed");
  cmp->add_option("--threads", ccfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmp->add_option("--out", cmp_out, "CSV file (default: stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Drone-count x speed grid over a directory of instances");
  std::string bench_dir, bench_out;
  GraspConfig bcfg;
  bcfg.threads = default_threads();
  std::vector<double> bench_speeds{40, 50, 60, 70, 80};
  bool bench_exact = false;
  bench->add_option("dir", bench_dir, "Directory of instance JSON files")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--iters", bcfg.n_max, "GRASP iterations")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bcfg.seed, "Random seed");
  bench->add_option("--threads", bcfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--speeds", bench_speeds, "Drone speeds")->delimiter(',');
  bench->add_flag("--exact", bench_exact, "Add exact columns where the instance is small enough");
  bench->add_option("--out", bench_out, "CSV file (default: stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a solution file against an instance");
  std::string verify_sol;
  verify->add_option("instance", instance_path, "Instance JSON")->required();
  verify->add_option("solution", verify_sol, "Solution JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  auto emit = [&](const std::string& path, const std::string& text) {
    if (path.empty()) {
      out << text;
    } else {
      write_text_file(path, text);
    }
  };
  auto load = [&](const Overrides* over) {
    Instance inst = instance_from_json(read_json_file(instance_path));
    if (over) over->apply(inst);
    return inst;
  };

  try {
    if (*gen) {
      Instance inst;
      if (coincident) {
        inst = generate_coincident(gcfg.d, gcfg.n_truck, gcfg.seed, gcfg.truck_speed,
                                   gcfg.drone_speed, gcfg.endurance, gen_drones.value_or(2));
      } else {
        gcfg.num_drones = gen_drones;
        inst = generate(gcfg);
      }
      emit(gen_out, dump(to_json(inst)));
      return kOk;
    }

    if (*solve) {
      Instance inst = load(&solve_over);
      const TimeMatrices mats(inst);
      validate(inst, mats);
      scfg.variant = parse_variant(variant_text);
      scfg.time_limit = time_limit;
      MoveTrace tr;
      if (trace) {
        tr = [&err](std::string_view op, double delta, double obj) {
          err << op << " " << fmt("%.9f", delta) << " " << fmt("%.9f", obj) << "\n";
        };
      }
      GraspResult res = run_grasp(inst, mats, scfg, tr);
      emit(sol_out, dump(to_json(res.best)));
      if (!report_out.empty()) write_text_file(report_out, dump(to_json(res.report)));
      if (!sol_out.empty()) {
        err << "objective " << fmt("%.6f", res.report.objective) << " h, |V_t| "
            << res.report.visited_nodes << ", " << res.report.failed_constructions
            << " failed constructions\n";
      }
      return kOk;
    }

    if (*exact) {
      Instance inst = load(&exact_over);
      const TimeMatrices mats(inst);
      validate(inst, mats);
      ExactResult res = solve_exact(inst, mats, parse_variant(variant_text));
      emit(exact_out, dump(to_json(res.solution)));
      return kOk;
    }

    if (*milp) {
      Instance inst = load(&milp_over);
      const TimeMatrices mats(inst);
      std::ostringstream lp;
      if (u_model) {
        export_u_min_model(inst, mats, lp);
      } else {
        MilpOptions opts;
        opts.literal_summed_wait = literal_wait;
        export_milp(inst, mats, parse_variant(variant_text), big_m.value_or(safe_big_m(inst, mats)),
                    lp, opts);
      }
      emit(milp_out, lp.str());
      return kOk;
    }

    if (*import) {
      Instance inst = load(&import_over);
      const TimeMatrices mats(inst);
      std::ifstream in(values_path);
      if (!in) throw FormatError("cannot open " + values_path);
      Solution sol = import_milp_solution(in, inst, mats, parse_variant(variant_text));
      emit(import_out, dump(to_json(sol)));
      return kOk;
    }

    if (*cmp) {
      Instance inst = load(nullptr);
      if (!is_coincident(inst)) {
        err << "warning: truck nodes do not coincide with the customers\n";
      }
      const auto rows = compare_mode(inst, speeds, fleets, ccfg);
      std::ostringstream csv;
      write_compare_csv(csv, rows);
      emit(cmp_out, csv.str());
      return kOk;
    }

    if (*bench) {
      std::ostringstream csv;
      csv << "Data,v_d,u,GRASP_s_Obj,GRASP_s_Time,GRASP_m_Obj,GRASP_m_Time,"
             "GRASP_s_Obj_min,GRASP_m_Obj_min";
      if (bench_exact) csv << ",Exact_s_Obj,Exact_m_Obj";
      csv << "\n";
      for (const auto& path : list_instances(bench_dir)) {
        const Instance base = instance_from_json(read_json_file(path));
        const int u_min = compute_u_min(base, TimeMatrices(base)).u_min;
        for (double speed : bench_speeds) {
          for (int u = u_min; u <= u_min + 3; ++u) {
            Instance inst = base;
            inst.drone_speed = speed;
            inst.num_drones = u;
            const TimeMatrices mats(inst);
            csv << inst.name << "," << speed << "," << u;
            std::string obj_min[2];
            for (Variant v : {Variant::SingleTrip, Variant::MultiTrip}) {
              GraspConfig c = bcfg;
              c.variant = v;
              try {
                validate(inst, mats);
                const RunReport r = run_grasp(inst, mats, c).report;
                csv << "," << fmt("%.3f", r.objective) << "," << fmt("%.3f", r.wall_time);
                obj_min[v == Variant::MultiTrip] = fmt("%.1f", r.objective * 60);
              } catch (const std::exception& e) {
                csv << ",NA,NA";
                obj_min[v == Variant::MultiTrip] = "NA";
              }
            }
            csv << "," << obj_min[0] << "," << obj_min[1];
            if (bench_exact) {
              for (Variant v : {Variant::SingleTrip, Variant::MultiTrip}) {
                try {
                  csv << "," << fmt("%.3f", solve_exact(inst, mats, v).objective);
                } catch (const std::exception&) {
                  csv << ",NA";
                }
              }
            }
            csv << "\n";
          }
        }
      }
      emit(bench_out, csv.str());
      return kOk;
    }

    if (*verify) {
      const Instance inst = load(nullptr);
      const TimeMatrices mats(inst);
      Solution sol = solution_from_json(read_json_file(verify_sol), inst.m());
      const double claimed = sol.objective;
      const auto violations = check_feasibility(sol, inst, mats);
      if (!violations.empty()) {
        out << "INFEASIBLE\n";
        for (const auto& v : violations) out << "  " << v.describe() << "\n";
        return kFailure;
      }
      const double actual = evaluate_into(sol, inst, mats);
      if (std::abs(actual - claimed) > 1e-6) {
        out << "OBJECTIVE MISMATCH: file says " << fmt("%.9f", claimed) << ", recomputed "
            << fmt("%.9f", actual) << "\n";
        return kFailure;
      }
      out << "OK objective " << fmt("%.6f", actual) << " h\n";
      return kOk;
    }
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MilpParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace twoecho::cli
