#pragma once

#include "clay/accel/adjacency.hpp"
#include "clay/accel/bvh.hpp"
#include "clay/convert/grid_placement.hpp"
#include "clay/types.hpp"

namespace clay {

/// Signed distance sampled at the cell centers of an explicitly placed grid.
/// Magnitude from the exact closest point, sign from ray parity (inside is negative).
inline SdfGrid mesh_to_sdfgrid(const TriangleMesh& mesh, const Resolution& res, const GridPlacement& place) {
  mesh.validate();
  if (mesh.faces.empty() || !is_watertight(build_adjacency(mesh))) {
    throw PreconditionError("signed distance needs a watertight mesh");
  }
  const TriangleBvh bvh(mesh);
  SdfGrid grid(res, place.origin, place.voxel_size, 0.0);
  const auto cells = static_cast<std::ptrdiff_t>(grid.cell_count());
  const auto [rx, ry, rz] = res;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t c = 0; c < cells; ++c) {
    const int x = static_cast<int>(c % rx);
    const int y = static_cast<int>((c / rx) % ry);
    const int z = static_cast<int>(c / (static_cast<std::ptrdiff_t>(rx) * ry));
    const Vec3 p = grid.cell_center(x, y, z);
    const double d = bvh.closest_point(p).distance;
    grid.values[c] = point_inside(bvh, p).inside ? -d : d;
  }
  (void)rz;
  return grid;
}

/// Grid placed with fit_centered_lattice(): the central sample sits on the
/// bounding-box center and `padding_cells` spacings surround the box.
inline SdfGrid mesh_to_sdfgrid(const TriangleMesh& mesh, const Resolution& res, double padding_cells = 2.0) {
  if (mesh.faces.empty()) throw PreconditionError("signed distance needs a watertight mesh");
  return mesh_to_sdfgrid(mesh, res, fit_centered_lattice(mesh.bounds(), res, padding_cells));
}

}  // namespace clay
