#pragma once

#include <span>
#include <vector>

#include "clay/metrics/nearest.hpp"
#include "clay/types.hpp"

namespace clay {

struct ChamferResult {
  double value = 0.0;
  std::vector<std::int32_t> a_to_b;  // nearest point of B for each point of A
  std::vector<std::int32_t> b_to_a;
};

struct ChamferGradient {
  std::vector<Vec3> grad_a;
  std::vector<Vec3> grad_b;
};

/// Mean squared nearest-neighbor distance from A to B plus that from B to A.
inline ChamferResult chamfer_distance(std::span<const Vec3> a, std::span<const Vec3> b,
                                      NnMethod method = NnMethod::Auto) {
  if (a.empty() || b.empty()) throw DomainError("chamfer distance needs two non-empty point sets");
  const auto ab = nearest_neighbors(a, b, method);
  const auto ba = nearest_neighbors(b, a, method);
  ChamferResult r;
  r.a_to_b.resize(a.size());
  r.b_to_a.resize(b.size());
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sa += ab[i].sq_distance;
    r.a_to_b[i] = ab[i].index;
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    sb += ba[j].sq_distance;
    r.b_to_a[j] = ba[j].index;
  }
  r.value = sa / static_cast<double>(a.size()) + sb / static_cast<double>(b.size());
  return r;
}

inline ChamferResult chamfer_distance(const PointCloud& a, const PointCloud& b, NnMethod method = NnMethod::Auto) {
  return chamfer_distance(std::span<const Vec3>(a.points), std::span<const Vec3>(b.points), method);
}

/// Gradient of upstream * chamfer with the nearest-neighbor assignment held fixed.
inline ChamferGradient chamfer_vjp(std::span<const Vec3> a, std::span<const Vec3> b, const ChamferResult& r,
                                   double upstream = 1.0) {
  ChamferGradient g;
  g.grad_a.assign(a.size(), Vec3::Zero());
  g.grad_b.assign(b.size(), Vec3::Zero());
  const double wa = 2.0 * upstream / static_cast<double>(a.size());
  const double wb = 2.0 * upstream / static_cast<double>(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec3 d = wa * (a[i] - b[r.a_to_b[i]]);
    g.grad_a[i] += d;
    g.grad_b[r.a_to_b[i]] -= d;
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    const Vec3 d = wb * (b[j] - a[r.b_to_a[j]]);
    g.grad_b[j] += d;
    g.grad_a[r.b_to_a[j]] -= d;
  }
  return g;
}

}  // namespace clay
