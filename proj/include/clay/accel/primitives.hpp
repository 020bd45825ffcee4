#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "clay/types.hpp"

namespace clay {

/// Which feature of a triangle the closest point lies on.
enum class TriangleRegion : std::uint8_t { Vertex0, Vertex1, Vertex2, Edge01, Edge12, Edge20, Interior };

struct TrianglePoint {
  Vec3 point;
  Vec3 barycentric;
  double sq_distance = 0.0;
  TriangleRegion region = TriangleRegion::Interior;
};

/// Squared distance from p to segment [a, b] and the clamped segment parameter.
inline double point_segment_sq_distance(const Vec3& p, const Vec3& a, const Vec3& b, double* t_out = nullptr) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  if (t_out) *t_out = t;
  return (a + t * ab - p).squaredNorm();
}

/// Exact closest point on triangle abc (Voronoi-region walk).
inline TrianglePoint closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  auto make = [&](double u, double v, double w, TriangleRegion r) {
    TrianglePoint out;
    out.barycentric = Vec3(u, v, w);
    switch (r) {
      case TriangleRegion::Vertex0: out.point = a; break;
      case TriangleRegion::Vertex1: out.point = b; break;
      case TriangleRegion::Vertex2: out.point = c; break;
      default: out.point = u * a + v * b + w * c; break;
    }
    out.sq_distance = (out.point - p).squaredNorm();
    out.region = r;
    return out;
  };

  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return make(1, 0, 0, TriangleRegion::Vertex0);

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return make(0, 1, 0, TriangleRegion::Vertex1);

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return make(1 - v, v, 0, TriangleRegion::Edge01);
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return make(0, 0, 1, TriangleRegion::Vertex2);

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return make(1 - w, 0, w, TriangleRegion::Edge20);
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return make(0, 1 - w, w, TriangleRegion::Edge12);
  }

  const double sum = va + vb + vc;
  if (!(sum > 0.0) || !std::isfinite(1.0 / sum)) {
    // Degenerate (zero-area) triangle: the answer lies on one of its edges.
    double t01, t12, t20;
    const double e01 = point_segment_sq_distance(p, a, b, &t01);
    const double e12 = point_segment_sq_distance(p, b, c, &t12);
    const double e20 = point_segment_sq_distance(p, c, a, &t20);
    if (e01 <= e12 && e01 <= e20) return make(1 - t01, t01, 0, TriangleRegion::Edge01);
    if (e12 <= e20) return make(0, 1 - t12, t12, TriangleRegion::Edge12);
    return make(t20, 0, 1 - t20, TriangleRegion::Edge20);
  }
  const double v = vb / sum;
  const double w = vc / sum;
  return make(1 - v - w, v, w, TriangleRegion::Interior);
}

/// Barycentric tolerance below which a ray hit is reported as grazing an edge or vertex.
inline constexpr double kGrazingTolerance = 1e-10;
/// Hits at or before this ray parameter are ignored.
inline constexpr double kMinRayT = 1e-12;

struct RayTriangleHit {
  double t = 0.0;
  double u = 0.0;  // weight of vertex 1
  double v = 0.0;  // weight of vertex 2
  bool grazing = false;
};

/// Moller-Trumbore with a symmetric barycentric band: hits whose coordinates
/// fall within kGrazingTolerance of an edge are kept and flagged so callers
/// can retry with a perturbed ray instead of trusting the parity.
inline std::optional<RayTriangleHit> intersect_ray_triangle(const Vec3& origin, const Vec3& dir,
                                                            const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 pv = dir.cross(e2);
  const double det = e1.dot(pv);
  const double scale = e1.norm() * e2.norm() * dir.norm();
  if (!(std::abs(det) > 1e-14 * scale)) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 tv = origin - a;
  const double u = tv.dot(pv) * inv;
  if (u < -kGrazingTolerance || u > 1.0 + kGrazingTolerance) return std::nullopt;
  const Vec3 qv = tv.cross(e1);
  const double v = dir.dot(qv) * inv;
  if (v < -kGrazingTolerance || u + v > 1.0 + kGrazingTolerance) return std::nullopt;
  const double t = e2.dot(qv) * inv;
  if (!(t > kMinRayT)) return std::nullopt;
  const double w = 1.0 - u - v;
  const bool grazing = u < kGrazingTolerance || v < kGrazingTolerance || w < kGrazingTolerance;
  return RayTriangleHit{t, u, v, grazing};
}

/// Separating-axis test between triangle abc and the closed box center +/- half.
inline bool triangle_box_overlap(const Vec3& center, const Vec3& half, const Vec3& a, const Vec3& b,
                                 const Vec3& c) {
  const Vec3 v0 = a - center, v1 = b - center, v2 = c - center;
  auto separated = [&](const Vec3& axis) {
    const double p0 = axis.dot(v0), p1 = axis.dot(v1), p2 = axis.dot(v2);
    const double r = half.x() * std::abs(axis.x()) + half.y() * std::abs(axis.y()) +
                     half.z() * std::abs(axis.z());
    return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
  };
  // Box face normals.
  for (int k = 0; k < 3; ++k) {
    if (std::min({v0[k], v1[k], v2[k]}) > half[k] || std::max({v0[k], v1[k], v2[k]}) < -half[k]) {
      return false;
    }
  }
  const Vec3 edges[3] = {v1 - v0, v2 - v1, v0 - v2};
  if (separated(edges[0].cross(edges[1]))) return false;
  for (const auto& e : edges) {
    for (int k = 0; k < 3; ++k) {
      if (separated(Vec3::Unit(k).cross(e))) return false;
    }
  }
  return true;
}

/// Slab test; true when the ray's [t_min, t_max] range meets the box.
inline bool ray_hits_box(const Vec3& origin, const Vec3& dir, const Aabb& box, double t_max) {
  double t0 = 0.0, t1 = t_max;
  for (int k = 0; k < 3; ++k) {
    if (dir[k] == 0.0) {
      if (origin[k] < box.lo[k] || origin[k] > box.hi[k]) return false;
      continue;
    }
    const double inv = 1.0 / dir[k];
    double ta = (box.lo[k] - origin[k]) * inv;
    double tb = (box.hi[k] - origin[k]) * inv;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace clay
