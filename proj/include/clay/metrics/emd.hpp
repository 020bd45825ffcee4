#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "clay/types.hpp"

namespace clay {

struct MatchingResult {
  std::vector<std::int32_t> assignment;  // assignment[i] = matched index in B
  double cost = 0.0;                     // sum of matched squared distances
  double gap_bound = 0.0;                // cost - optimum <= gap_bound
};

/// Forward auction with epsilon scaling on the squared-distance cost matrix.
/// Bidders are served lowest index first and object ties go to the lowest
/// index, so the result is a pure function of the inputs. Each phase ends
/// with every bidder within eps of its best object (eps-complementary
/// slackness), which bounds the final cost within n * epsilon of optimal.
inline MatchingResult emd_approx(std::span<const Vec3> a, std::span<const Vec3> b, double epsilon) {
  const std::size_t n = a.size();
  if (n != b.size()) throw DomainError("emd needs point sets of equal size");
  if (n == 0) throw DomainError("emd needs non-empty point sets");
  if (!(epsilon > 0.0)) throw DomainError("emd epsilon must be positive");

  std::vector<double> cost(n * n);
  double max_cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cost[i * n + j] = (a[i] - b[j]).squaredNorm();
      max_cost = std::max(max_cost, cost[i * n + j]);
    }
  }

  std::vector<double> price(n, 0.0);
  std::vector<std::int32_t> owner(n, -1);    // object -> bidder
  std::vector<std::int32_t> assigned(n, -1);  // bidder -> object
  double eps = std::max(epsilon, max_cost / 4.0);
  for (;;) {
    std::fill(owner.begin(), owner.end(), -1);
    std::fill(assigned.begin(), assigned.end(), -1);
    std::deque<std::int32_t> queue;
    for (std::size_t i = 0; i < n; ++i) queue.push_back(static_cast<std::int32_t>(i));
    while (!queue.empty()) {
      const std::int32_t i = queue.front();
      queue.pop_front();
      double best = -std::numeric_limits<double>::infinity(), second = best;
      std::int32_t best_j = -1;
      for (std::size_t j = 0; j < n; ++j) {
        const double value = -cost[i * n + j] - price[j];
        if (value > best) {
          second = best;
          best = value;
          best_j = static_cast<std::int32_t>(j);
        } else if (value > second) {
          second = value;
        }
      }
      const double raise = (n == 1 ? 0.0 : best - second) + eps;
      price[best_j] += raise;
      if (owner[best_j] >= 0) {
        assigned[owner[best_j]] = -1;
        queue.push_back(owner[best_j]);
      }
      owner[best_j] = i;
      assigned[i] = best_j;
    }
    if (eps <= epsilon) break;
    eps = std::max(epsilon, eps / 5.0);
  }

  MatchingResult r;
  r.assignment = std::move(assigned);
  for (std::size_t i = 0; i < n; ++i) r.cost += cost[i * n + r.assignment[i]];
  r.gap_bound = static_cast<double>(n) * epsilon;
  return r;
}

inline MatchingResult emd_approx(const PointCloud& a, const PointCloud& b, double epsilon) {
  return emd_approx(std::span<const Vec3>(a.points), std::span<const Vec3>(b.points), epsilon);
}

}  // namespace clay
