#pragma once

#include <cmath>

#include "clay/convert/grid_placement.hpp"
#include "clay/types.hpp"

namespace clay {

/// Bins points into an explicitly placed grid; points outside are clamped to the border cells.
inline VoxelGrid pointcloud_to_voxel(const PointCloud& pc, const Resolution& res, const GridPlacement& place) {
  if (pc.empty()) throw DomainError("cannot voxelize an empty point cloud");
  pc.validate();
  VoxelGrid grid(res, place.origin, place.voxel_size, 0.0);
  for (const auto& p : pc.points) {
    std::array<int, 3> c;
    for (int k = 0; k < 3; ++k) {
      const double f = std::floor((p[k] - grid.origin[k]) / grid.voxel_size);
      c[k] = f < 0.0 ? 0 : (f >= res[k] ? res[k] - 1 : static_cast<int>(f));
    }
    grid.at(c[0], c[1], c[2]) = 1.0;
  }
  return grid;
}

inline VoxelGrid pointcloud_to_voxel(const PointCloud& pc, const Resolution& res) {
  if (pc.empty()) throw DomainError("cannot voxelize an empty point cloud");
  return pointcloud_to_voxel(pc, res, fit_grid(pc.bounds(), res));
}

/// World-space centers of cells with value >= threshold, x-fastest order.
inline PointCloud voxel_to_pointcloud(const VoxelGrid& vox, double threshold = 0.5) {
  PointCloud out;
  const auto [rx, ry, rz] = vox.resolution;
  for (int z = 0; z < rz; ++z) {
    for (int y = 0; y < ry; ++y) {
      for (int x = 0; x < rx; ++x) {
        if (vox.at(x, y, z) >= threshold) out.points.push_back(vox.cell_center(x, y, z));
      }
    }
  }
  if (out.empty()) throw DomainError("no cell reaches the occupancy threshold");
  return out;
}

}  // namespace clay
