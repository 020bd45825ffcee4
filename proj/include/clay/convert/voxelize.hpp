#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "clay/accel/adjacency.hpp"
#include "clay/accel/bvh.hpp"
#include "clay/accel/primitives.hpp"
#include "clay/convert/grid_placement.hpp"
#include "clay/random.hpp"
#include "clay/types.hpp"

namespace clay {

enum class VoxelizeMode { Surface, Solid };

namespace detail {

inline int clamp_cell(double coord, int res) {
  const double c = std::floor(coord);
  if (c < 0.0) return 0;
  if (c >= res) return res - 1;
  return static_cast<int>(c);
}

inline void rasterize_surface(const TriangleMesh& mesh, VoxelGrid& grid) {
  const double vs = grid.voxel_size;
  const Vec3 half = Vec3::Constant(0.5 * vs);
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Vec3 &a = mesh.corner(f, 0), &b = mesh.corner(f, 1), &c = mesh.corner(f, 2);
    const Vec3 lo = (a.cwiseMin(b).cwiseMin(c) - grid.origin) / vs;
    const Vec3 hi = (a.cwiseMax(b).cwiseMax(c) - grid.origin) / vs;
    std::array<int, 3> i0, i1;
    for (int k = 0; k < 3; ++k) {
      // One extra cell on each side: closed cell boxes may touch a vertex on their face.
      i0[k] = std::max(0, clamp_cell(lo[k], grid.resolution[k]) - 1);
      i1[k] = std::min(grid.resolution[k] - 1, clamp_cell(hi[k], grid.resolution[k]) + 1);
      if (hi[k] < -1.0 || lo[k] > grid.resolution[k] + 1.0) i1[k] = i0[k] - 1;  // fully outside
    }
    for (int z = i0[2]; z <= i1[2]; ++z) {
      for (int y = i0[1]; y <= i1[1]; ++y) {
        for (int x = i0[0]; x <= i1[0]; ++x) {
          double& cell = grid.at(x, y, z);
          if (cell == 1.0) continue;
          if (triangle_box_overlap(grid.cell_center(x, y, z), half, a, b, c)) cell = 1.0;
        }
      }
    }
  }
}

// Marks cells whose centers are inside the mesh, one +x parity ray per row.
// A row whose ray grazes an edge is re-cast from a slightly shifted origin.
inline void fill_interior(const TriangleMesh& mesh, VoxelGrid& grid) {
  const TriangleBvh bvh(mesh);
  const auto [rx, ry, rz] = grid.resolution;
  const double vs = grid.voxel_size;
  const CounterRng rng(0x70ce11ULL);
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(ry) * rz;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t row = 0; row < rows; ++row) {
    const int y = static_cast<int>(row % ry);
    const int z = static_cast<int>(row / ry);
    const Vec3 start = grid.cell_center(0, y, z) - Vec3(vs, 0, 0);
    std::vector<RayHit> hits;
    for (int attempt = 0; attempt <= kMaxGrazingRetries; ++attempt) {
      Vec3 origin = start;
      if (attempt > 0) {
        const auto ctr = static_cast<std::uint64_t>(row) * 64 + attempt;
        origin.y() += (rng.uniform(ctr, 0) - 0.5) * 1e-3 * vs;
        origin.z() += (rng.uniform(ctr, 1) - 0.5) * 1e-3 * vs;
      }
      hits = bvh.ray_intersections(origin, Vec3::UnitX());
      if (!any_grazing(hits)) break;
    }
    std::size_t crossed = 0;
    for (int x = 0; x < rx; ++x) {
      const double tx = grid.cell_center(x, y, z).x() - start.x();
      while (crossed < hits.size() && hits[crossed].t < tx) ++crossed;
      if (crossed % 2 == 1) grid.at(x, y, z) = 1.0;
    }
  }
}

}  // namespace detail

/// Voxelizes into an explicitly placed grid. Surface: a cell is occupied iff
/// some triangle overlaps its closed box. Solid: surface cells plus every cell
/// whose center is inside the (watertight) mesh.
inline VoxelGrid voxelize_mesh(const TriangleMesh& mesh, const Resolution& res, const GridPlacement& place,
                               VoxelizeMode mode) {
  mesh.validate();
  if (mesh.faces.empty()) throw EmptyMeshError("cannot voxelize a mesh with no faces");
  VoxelGrid grid(res, place.origin, place.voxel_size, 0.0);
  if (mode == VoxelizeMode::Solid && !is_watertight(build_adjacency(mesh))) {
    throw PreconditionError("solid voxelization needs a watertight mesh");
  }
  detail::rasterize_surface(mesh, grid);
  if (mode == VoxelizeMode::Solid) detail::fill_interior(mesh, grid);
  return grid;
}

/// Grid fitted to the mesh bounds with fit_grid().
inline VoxelGrid voxelize_mesh(const TriangleMesh& mesh, const Resolution& res, VoxelizeMode mode) {
  if (mesh.faces.empty()) throw EmptyMeshError("cannot voxelize a mesh with no faces");
  return voxelize_mesh(mesh, res, fit_grid(mesh.bounds(), res), mode);
}

}  // namespace clay
