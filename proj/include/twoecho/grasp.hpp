#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "twoecho/construct.hpp"
#include "twoecho/localsearch.hpp"
#include "twoecho/model.hpp"
#include "twoecho/rng.hpp"

namespace twoecho {

struct GraspConfig {
  long long n_max = 5000;
  std::uint64_t seed = 1;
  Variant variant = Variant::SingleTrip;
  std::optional<double> time_limit;  // seconds, checked between iterations
  int threads = 1;
};

class NoSolutionFound : public std::runtime_error {
 public:
  explicit NoSolutionFound(long long failures)
      : std::runtime_error("GRASP: all " + std::to_string(failures) +
                           " constructions failed"),
        failures_(failures) {}
  long long failures() const { return failures_; }

 private:
  long long failures_;
};

struct GraspResult {
  Solution best;
  RunReport report;
};

/// Seed of worker w's random stream.
inline std::uint64_t worker_seed(std::uint64_t master, int worker) {
  return derive_seed(master, static_cast<std::uint64_t>(worker));
}

namespace detail {

struct WorkerOutcome {
  std::optional<Solution> best;
  long long iterations = 0;
  long long failures = 0;
};

inline bool better(const Solution& a, const Solution& b) {
  if (a.objective != b.objective) return a.objective < b.objective;
  return lexicographically_less(a, b);
}

inline WorkerOutcome grasp_worker(const Instance& inst, const TimeMatrices& mats,
                                  const GraspConfig& cfg, int worker, long long iterations,
                                  std::chrono::steady_clock::time_point start,
                                  const MoveTrace& trace) {
  WorkerOutcome out;
  Rng rng(worker_seed(cfg.seed, worker));
  for (long long it = 0; it < iterations; ++it) {
    if (cfg.time_limit) {
      const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start;
      if (spent.count() >= *cfg.time_limit) break;
    }
    ++out.iterations;
    auto built = construct_solution(inst, mats, cfg.variant, rng);
    if (!built) {
      ++out.failures;
      continue;
    }
    Solution improved = local_search(inst, mats, *built, trace);
    if (!out.best || improved.objective < out.best->objective) out.best = std::move(improved);
  }
  return out;
}

}  // namespace detail

/// Construct + local search, n_max times, keeping the best solution.
/// Failed constructions count as iterations.
inline GraspResult run_grasp(const Instance& inst, const TimeMatrices& mats,
                             const GraspConfig& cfg, const MoveTrace& trace = {}) {
  if (cfg.n_max < 1) throw std::invalid_argument("GRASP: n_max must be >= 1");
  const int threads = std::max(1, cfg.threads);
  const auto start = std::chrono::steady_clock::now();

  std::vector<detail::WorkerOutcome> outcomes(threads);
  auto share = [&](int w) {
    return cfg.n_max / threads + (w < cfg.n_max % threads ? 1 : 0);
  };
  if (threads == 1) {
    outcomes[0] = detail::grasp_worker(inst, mats, cfg, 0, cfg.n_max, start, trace);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        outcomes[w] = detail::grasp_worker(inst, mats, cfg, w, share(w), start, {});
      });
    }
    for (auto& t : pool) t.join();
  }

  GraspResult result;
  std::optional<Solution> best;
  long long iterations = 0;
  long long failures = 0;
  for (auto& o : outcomes) {
    iterations += o.iterations;
    failures += o.failures;
    if (o.best && (!best || detail::better(*o.best, *best))) best = std::move(o.best);
  }
  if (!best) throw NoSolutionFound(failures);

  const Evaluation ev = evaluate(*best, inst, mats);
  result.best = std::move(*best);
  auto& r = result.report;
  r.instance = inst.name;
  r.variant = cfg.variant;
  r.num_drones = inst.num_drones;
  r.drone_speed = inst.drone_speed;
  r.visited_nodes = visited_count(result.best);
  r.objective = ev.objective;
  r.wait_time = ev.wait_time;
  r.travel_time = ev.travel_time;
  r.iterations = iterations;
  r.failed_constructions = failures;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace twoecho
