#pragma once

// Closed-tour helpers shared by the exact solver and the truck-only baseline.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace twoecho {

/// Held-Karp table over points 0..N-1 with 0 as the fixed start. One build
/// answers "shortest closed tour through 0 and subset S" for every S of
/// {1..N-1}; subsets are bit masks over (node - 1).
template <typename Dist>
class HeldKarp {
 public:
  HeldKarp(int num_points, Dist dist) : n_(num_points - 1), dist_(std::move(dist)) {
    if (num_points < 1) throw std::invalid_argument("HeldKarp: need the start point");
    if (n_ > 24) throw std::invalid_argument("HeldKarp: too many points");
    const std::size_t masks = std::size_t{1} << n_;
    cost_.assign(masks * std::max(n_, 1), kInf);
    parent_.assign(masks * std::max(n_, 1), -1);
    for (int j = 0; j < n_; ++j) cost_[at(std::size_t{1} << j, j)] = dist_(0, j + 1);
    for (std::size_t mask = 1; mask < masks; ++mask) {
      for (int j = 0; j < n_; ++j) {
        if (!(mask >> j & 1)) continue;
        const double cur = cost_[at(mask, j)];
        if (cur == kInf) continue;
        for (int k = 0; k < n_; ++k) {
          if (mask >> k & 1) continue;
          const std::size_t slot = at(mask | std::size_t{1} << k, k);
          const double cand = cur + dist_(j + 1, k + 1);
          if (cand < cost_[slot]) {
            cost_[slot] = cand;
            parent_[slot] = static_cast<std::int8_t>(j);
          }
        }
      }
    }
  }

  double tour_cost(std::size_t mask) const {
    if (mask == 0) return 0.0;
    return cost_[at(mask, last_of(mask))] + dist_(last_of(mask) + 1, 0);
  }

  /// Optimal tour for `mask`, starting with 0 (closing return implicit).
  std::vector<int> tour(std::size_t mask) const {
    std::vector<int> rev;
    if (mask != 0) {
      int last = last_of(mask);
      std::size_t cur = mask;
      while (last >= 0) {
        rev.push_back(last + 1);
        const int prev = parent_[at(cur, last)];
        cur &= ~(std::size_t{1} << last);
        last = prev;
      }
    }
    std::vector<int> out{0};
    out.insert(out.end(), rev.rbegin(), rev.rend());
    return out;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  std::size_t at(std::size_t mask, int j) const { return mask * n_ + j; }

  // Node (bit index) the optimal path over `mask` ends at before closing.
  int last_of(std::size_t mask) const {
    int last = -1;
    double best = kInf;
    for (int j = 0; j < n_; ++j) {
      if (!(mask >> j & 1)) continue;
      const double c = cost_[at(mask, j)] + dist_(j + 1, 0);
      if (c < best) {
        best = c;
        last = j;
      }
    }
    return last;
  }

  int n_;
  Dist dist_;
  std::vector<double> cost_;
  std::vector<std::int8_t> parent_;
};

template <typename Dist>
double closed_tour_length(const std::vector<int>& tour, const Dist& dist) {
  double total = 0.0;
  for (std::size_t p = 0; p < tour.size(); ++p) {
    total += dist(tour[p], p + 1 < tour.size() ? tour[p + 1] : tour[0]);
  }
  return total;
}

/// Nearest neighbour from point 0, then 2-opt and Or-opt (segments of 1-3,
/// either orientation) until neither improves.
template <typename Dist>
std::vector<int> heuristic_tour(int num_points, const Dist& dist) {
  constexpr double eps = 1e-12;
  std::vector<int> tour{0};
  std::vector<char> used(num_points, 0);
  used[0] = 1;
  for (int step = 1; step < num_points; ++step) {
    const int from = tour.back();
    int best = -1;
    for (int j = 0; j < num_points; ++j) {
      if (!used[j] && (best < 0 || dist(from, j) < dist(from, best))) best = j;
    }
    used[best] = 1;
    tour.push_back(best);
  }
  const int len = num_points;
  auto nxt = [&](int p) { return tour[(p + 1) % len]; };

  bool improved = true;
  while (improved) {
    improved = false;
    for (int p = 1; p < len - 1; ++p) {
      for (int q = p + 1; q < len; ++q) {
        const int a = tour[p - 1], b = tour[p], c = tour[q], d = nxt(q);
        if (dist(a, c) + dist(b, d) < dist(a, b) + dist(c, d) - eps) {
          std::reverse(tour.begin() + p, tour.begin() + q + 1);
          improved = true;
        }
      }
    }
    for (int seg = 1; seg <= 3 && !improved; ++seg) {
      for (int p = 1; p + seg <= len && !improved; ++p) {
        const int first = tour[p], last = tour[p + seg - 1];
        const int before = tour[p - 1], after = tour[(p + seg) % len];
        const double gain = dist(before, first) + dist(last, after) - dist(before, after);
        std::vector<int> rest(tour.begin(), tour.begin() + p);
        rest.insert(rest.end(), tour.begin() + p + seg, tour.end());
        const int rl = static_cast<int>(rest.size());
        for (int q = 0; q < rl && !improved; ++q) {
          const int x = rest[q], y = rest[(q + 1) % rl];
          if (x == before && y == after) continue;
          const double fwd = dist(x, first) + dist(last, y) - dist(x, y);
          const double bwd = dist(x, last) + dist(first, y) - dist(x, y);
          if (std::min(fwd, bwd) < gain - eps) {
            std::vector<int> segment(tour.begin() + p, tour.begin() + p + seg);
            if (bwd < fwd) std::reverse(segment.begin(), segment.end());
            rest.insert(rest.begin() + q + 1, segment.begin(), segment.end());
            tour = std::move(rest);
            improved = true;
          }
        }
      }
    }
  }
  return tour;
}

}  // namespace twoecho
