#pragma once

#include <cstdint>
#include <unordered_map>

#include "clay/types.hpp"

namespace clay {

/// Boundary surface of the occupied cells (value >= threshold): one quad, as
/// two outward-facing triangles, per cell face whose neighbor is empty or
/// outside the grid. Corners are shared through their lattice index.
inline TriangleMesh voxel_to_mesh(const VoxelGrid& vox, double threshold = 0.5) {
  const auto [rx, ry, rz] = vox.resolution;
  auto occupied = [&](int x, int y, int z) {
    if (x < 0 || y < 0 || z < 0 || x >= rx || y >= ry || z >= rz) return false;
    return vox.at(x, y, z) >= threshold;
  };

  TriangleMesh mesh;
  std::unordered_map<std::uint64_t, std::int32_t> corner_ids;
  auto corner = [&](const std::array<int, 3>& c) {
    const std::uint64_t key =
        static_cast<std::uint64_t>(c[0]) +
        static_cast<std::uint64_t>(rx + 1) * (static_cast<std::uint64_t>(c[1]) +
                                              static_cast<std::uint64_t>(ry + 1) * static_cast<std::uint64_t>(c[2]));
    const auto [it, inserted] = corner_ids.try_emplace(key, static_cast<std::int32_t>(mesh.vertices.size()));
    if (inserted) mesh.vertices.push_back(vox.origin + vox.voxel_size * Vec3(c[0], c[1], c[2]));
    return it->second;
  };

  for (int z = 0; z < rz; ++z) {
    for (int y = 0; y < ry; ++y) {
      for (int x = 0; x < rx; ++x) {
        if (!occupied(x, y, z)) continue;
        const std::array<int, 3> cell{x, y, z};
        for (int axis = 0; axis < 3; ++axis) {
          for (int side : {-1, 1}) {
            std::array<int, 3> nb = cell;
            nb[axis] += side;
            if (occupied(nb[0], nb[1], nb[2])) continue;
            const int u = (axis + 1) % 3, v = (axis + 2) % 3;
            std::array<std::array<int, 3>, 4> quad;
            const int uv[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
            for (int q = 0; q < 4; ++q) {
              quad[q] = cell;
              quad[q][axis] += side > 0 ? 1 : 0;
              quad[q][u] += uv[q][0];
              quad[q][v] += uv[q][1];
            }
            // (u, v, axis) is right-handed, so 0-1-2-3 faces +axis.
            std::array<std::int32_t, 4> id;
            for (int q = 0; q < 4; ++q) id[q] = corner(quad[q]);
            if (side > 0) {
              mesh.faces.push_back({id[0], id[1], id[2]});
              mesh.faces.push_back({id[0], id[2], id[3]});
            } else {
              mesh.faces.push_back({id[0], id[2], id[1]});
              mesh.faces.push_back({id[0], id[3], id[2]});
            }
          }
        }
      }
    }
  }
  if (mesh.faces.empty()) throw EmptyMeshError("voxel grid has no occupied cells");
  return mesh;
}

}  // namespace clay
