#pragma once

#include <span>
#include <vector>

#include "clay/accel/bvh.hpp"
#include "clay/types.hpp"

namespace clay {

struct PointToSurfaceResult {
  double value = 0.0;
  std::vector<ClosestPointResult> closest;
};

/// Mean squared distance from each point to its closest point on the mesh.
inline PointToSurfaceResult point_to_surface(std::span<const Vec3> points, const TriangleBvh& bvh) {
  if (points.empty()) throw DomainError("point_to_surface needs at least one point");
  PointToSurfaceResult r;
  r.closest.resize(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) r.closest[i] = bvh.closest_point(points[i]);
  double sum = 0.0;
  for (const auto& c : r.closest) sum += c.sq_distance;
  r.value = sum / static_cast<double>(points.size());
  return r;
}

inline PointToSurfaceResult point_to_surface(std::span<const Vec3> points, const TriangleMesh& mesh) {
  return point_to_surface(points, TriangleBvh(mesh));
}

/// Gradient wrt the points, closest points held fixed.
inline std::vector<Vec3> point_to_surface_vjp(std::span<const Vec3> points, const PointToSurfaceResult& r,
                                              double upstream = 1.0) {
  std::vector<Vec3> g(points.size());
  const double w = 2.0 * upstream / static_cast<double>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) g[i] = w * (points[i] - r.closest[i].point);
  return g;
}

}  // namespace clay
