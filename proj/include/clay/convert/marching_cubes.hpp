#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "clay/convert/mc_tables.hpp"
#include "clay/types.hpp"

namespace clay {

namespace detail {

// Cube corner k sits at this (dx, dy, dz) offset from the cube's base sample.
inline constexpr std::array<std::array<int, 3>, 8> kCubeCorners = {{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}};

inline constexpr std::array<std::array<int, 2>, 12> kCubeEdges = {{
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}};

}  // namespace detail

/// Marching cubes over the sample lattice of an SDF grid. Vertices on the same
/// grid edge are shared, and a vertex landing exactly on a sample (value ==
/// iso) is shared by every edge through that sample. Triangles that collapse
/// to zero area are dropped.
/// Output triangles face toward increasing values (outward for an SDF).
inline TriangleMesh sdfgrid_to_mesh(const SdfGrid& sdf, double iso = 0.0) {
  bool below = false, above = false;
  for (double v : sdf.values) {
    if (!std::isfinite(v)) throw DomainError("non-finite SDF value");
    (v < iso ? below : above) = true;
  }
  if (!below || !above) throw EmptyMeshError("SDF grid never crosses the iso value");

  const auto [rx, ry, rz] = sdf.resolution;
  // Vertex id per (sample, axis) grid edge, -1 until created.
  std::vector<std::int32_t> edge_vertex(sdf.cell_count() * 3, -1);
  std::vector<std::int32_t> sample_vertex(sdf.cell_count(), -1);
  TriangleMesh mesh;

  auto sample_id = [&](const std::array<int, 3>& s) {
    std::int32_t& id = sample_vertex[sdf.index(s[0], s[1], s[2])];
    if (id < 0) {
      id = static_cast<std::int32_t>(mesh.vertices.size());
      mesh.vertices.push_back(sdf.cell_center(s[0], s[1], s[2]));
    }
    return id;
  };

  auto vertex_on_edge = [&](std::array<int, 3> a, std::array<int, 3> b) {
    if (b[0] + b[1] + b[2] < a[0] + a[1] + a[2]) std::swap(a, b);
    const int axis = b[0] != a[0] ? 0 : (b[1] != a[1] ? 1 : 2);
    const double va = sdf.at(a[0], a[1], a[2]);
    const double vb = sdf.at(b[0], b[1], b[2]);
    if (va == iso) return sample_id(a);
    if (vb == iso) return sample_id(b);
    const std::size_t key = sdf.index(a[0], a[1], a[2]) * 3 + axis;
    std::int32_t& id = edge_vertex[key];
    if (id < 0) {
      const double t = (iso - va) / (vb - va);
      const Vec3 pa = sdf.cell_center(a[0], a[1], a[2]);
      const Vec3 pb = sdf.cell_center(b[0], b[1], b[2]);
      const Vec3 p = pa + t * (pb - pa);
      // A crossing that rounds onto a sample joins that sample's vertex.
      if (p == pa) {
        id = sample_id(a);
      } else if (p == pb) {
        id = sample_id(b);
      } else {
        id = static_cast<std::int32_t>(mesh.vertices.size());
        mesh.vertices.push_back(p);
      }
    }
    return id;
  };

  for (int z = 0; z + 1 < rz; ++z) {
    for (int y = 0; y + 1 < ry; ++y) {
      for (int x = 0; x + 1 < rx; ++x) {
        int cube = 0;
        for (int k = 0; k < 8; ++k) {
          const auto& o = detail::kCubeCorners[k];
          if (sdf.at(x + o[0], y + o[1], z + o[2]) < iso) cube |= 1 << k;
        }
        if (detail::kEdgeTable[cube] == 0) continue;
        std::array<std::int32_t, 12> ids{};
        for (int e = 0; e < 12; ++e) {
          if (!(detail::kEdgeTable[cube] & (1 << e))) continue;
          const auto& c0 = detail::kCubeCorners[detail::kCubeEdges[e][0]];
          const auto& c1 = detail::kCubeCorners[detail::kCubeEdges[e][1]];
          ids[e] = vertex_on_edge({x + c0[0], y + c0[1], z + c0[2]}, {x + c1[0], y + c1[1], z + c1[2]});
        }
        const auto& row = detail::kTriTable[cube];
        for (int t = 0; row[t] != -1; t += 3) {
          // The table winds triangles toward the inside corners; reverse them.
          const Face f{ids[row[t]], ids[row[t + 2]], ids[row[t + 1]]};
          if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) continue;
          mesh.faces.push_back(f);
        }
      }
    }
  }

  // Drop sliver triangles produced by samples lying exactly on the iso value,
  // then compact away unreferenced vertices.
  std::vector<Face> kept;
  kept.reserve(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.face_area(f) > 1e-18) kept.push_back(mesh.faces[f]);
  }
  std::vector<std::int32_t> remap(mesh.vertices.size(), -1);
  std::vector<Vec3> verts;
  for (auto& f : kept) {
    for (auto& idx : f) {
      if (remap[idx] < 0) {
        remap[idx] = static_cast<std::int32_t>(verts.size());
        verts.push_back(mesh.vertices[idx]);
      }
      idx = remap[idx];
    }
  }
  mesh.vertices = std::move(verts);
  mesh.faces = std::move(kept);
  if (mesh.faces.empty()) throw EmptyMeshError("iso-surface extraction produced no triangles");
  return mesh;
}

}  // namespace clay
