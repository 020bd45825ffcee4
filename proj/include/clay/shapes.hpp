#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "clay/types.hpp"

namespace clay::shapes {

/// Axis-aligned box [lo, hi] as 12 outward-facing triangles over 8 corners.
inline TriangleMesh box(const Vec3& lo = Vec3::Zero(), const Vec3& hi = Vec3::Ones()) {
  TriangleMesh m;
  for (int k = 0; k < 8; ++k) {
    m.vertices.emplace_back((k & 1) ? hi.x() : lo.x(), (k & 2) ? hi.y() : lo.y(),
                            (k & 4) ? hi.z() : lo.z());
  }
  m.faces = {{0, 2, 1}, {1, 2, 3},   // z = lo
             {4, 5, 6}, {5, 7, 6},   // z = hi
             {0, 1, 4}, {1, 5, 4},   // y = lo
             {2, 6, 3}, {3, 6, 7},   // y = hi
             {0, 4, 2}, {2, 4, 6},   // x = lo
             {1, 3, 5}, {3, 7, 5}};  // x = hi
  return m;
}

/// Regular tetrahedron with unit edge length, outward winding.
inline TriangleMesh tetrahedron() {
  const double s = 1.0 / std::sqrt(8.0);
  TriangleMesh m;
  m.vertices = {Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)};
  m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return m;
}

/// Subdivided icosahedron projected onto the sphere. Level L has 20 * 4^L faces.
/// Vertex normals are set to the radial direction.
inline TriangleMesh icosphere(int level, double radius = 1.0, const Vec3& center = Vec3::Zero()) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                         {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                         {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                         {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::unordered_map<std::uint64_t, std::int32_t> midpoint;
    auto mid = [&](std::int32_t a, std::int32_t b) {
      const auto key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                       static_cast<std::uint32_t>(std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((0.5 * (v[a] + v[b])).normalized());
      const auto idx = static_cast<std::int32_t>(v.size() - 1);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Face> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const auto ab = mid(tri[0], tri[1]);
      const auto bc = mid(tri[1], tri[2]);
      const auto ca = mid(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  TriangleMesh m;
  m.vertex_normals = v;
  for (auto& p : v) p = center + radius * p;
  m.vertices = std::move(v);
  m.faces = std::move(f);
  return m;
}

/// n x n quads over [0, size]^2 in the z = 0 plane, each split into two triangles.
inline TriangleMesh grid_plane(int n, double size = 1.0) {
  TriangleMesh m;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) m.vertices.emplace_back(size * i / n, size * j / n, 0.0);
  }
  auto id = [n](int i, int j) { return static_cast<std::int32_t>(j * (n + 1) + i); };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return m;
}

}  // namespace clay::shapes
