#pragma once

#include <algorithm>
#include <cmath>

#include "clay/types.hpp"

namespace clay::detail {

/// Twice the signed area of (x, y, z).
inline double area2(const Vec2& x, const Vec2& y, const Vec2& z) {
  return (y.x() - x.x()) * (z.y() - x.y()) - (y.y() - x.y()) * (z.x() - x.x());
}

inline void area2_backward(const Vec2& x, const Vec2& y, const Vec2& z, double g, Vec2& gx, Vec2& gy, Vec2& gz) {
  gx += g * Vec2(y.y() - z.y(), z.x() - y.x());
  gy += g * Vec2(z.y() - x.y(), x.x() - z.x());
  gz += g * Vec2(x.y() - y.y(), y.x() - x.x());
}

/// area2(a, b, p) evaluated with the edge endpoints in a fixed order, so that
/// edge_function(a, b, p) == -edge_function(b, a, p) bit for bit.
inline double edge_function(const Vec2& a, const Vec2& b, const Vec2& p) {
  const bool swapped = b.x() < a.x() || (b.x() == a.x() && b.y() < a.y());
  return swapped ? -area2(b, a, p) : area2(a, b, p);
}

struct SegmentPoint {
  double sq_distance;
  double t;
  Vec2 closest;
};

inline SegmentPoint closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 c = a + t * ab;
  return {(p - c).squaredNorm(), t, c};
}

/// Gradient of |p - closest|^2 wrt the segment endpoints (t held at its optimum).
inline void segment_sq_distance_backward(const Vec2& p, const SegmentPoint& sp, double g, Vec2& ga, Vec2& gb) {
  const Vec2 d = 2.0 * g * (sp.closest - p);
  ga += (1.0 - sp.t) * d;
  gb += sp.t * d;
}

inline double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace clay::detail
