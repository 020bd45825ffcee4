#pragma once

#include <algorithm>
#include <cmath>

#include "clay/types.hpp"

namespace clay {

struct GridPlacement {
  Vec3 origin;
  double voxel_size;
};

/// Cell-aligned placement used by voxelization and point binning: the grid is
/// centered on the box, and cell centers along the longest axis run from the
/// box's min to its max, which pads the box by half a cell on each side
/// (voxel_size = longest extent / (max resolution - 1)). A single cell spans the
/// box exactly; a box with no extent gets unit cells.
inline GridPlacement fit_grid(const Aabb& box, const Resolution& res) {
  for (int r : res) {
    if (r <= 0) throw DomainError("grid resolution must be positive");
  }
  const double extent = box.extent().maxCoeff();
  const int rmax = *std::max_element(res.begin(), res.end());
  double vs = 1.0;
  if (extent > 0.0) vs = rmax > 1 ? extent / (rmax - 1) : extent;
  for (int k = 0; k < 3; ++k) {
    if (res[k] * vs < box.extent()[k] * (1.0 - 1e-12)) {
      throw PreconditionError("resolution along axis " + std::to_string(k) +
                              " is too small for the geometry to fit the grid");
    }
  }
  const Vec3 half = 0.5 * vs * Vec3(res[0], res[1], res[2]);
  return {box.center() - half, vs};
}

/// Sample-centered placement used for SDF grids: the sample with index R/2
/// (rounded down) sits exactly on the box center and at least `padding_cells`
/// sample spacings separate the box from the last sample on every side.
/// Needs room for at least one sample beyond the center on each axis with extent.
inline GridPlacement fit_centered_lattice(const Aabb& box, const Resolution& res, double padding_cells) {
  if (!(padding_cells >= 0.0)) throw DomainError("padding must be non-negative");
  const Vec3 half_extent = 0.5 * box.extent();
  double vs = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (res[k] <= 0) throw DomainError("grid resolution must be positive");
    const double room = (res[k] - 1) / 2 - padding_cells;  // samples above center, minus padding
    if (half_extent[k] > 0.0) {
      if (!(room > 0.0)) {
        throw PreconditionError("resolution along axis " + std::to_string(k) +
                                " leaves no room inside the padding");
      }
      vs = std::max(vs, half_extent[k] / room);
    }
  }
  if (!(vs > 0.0)) vs = 1.0;
  Vec3 origin;
  for (int k = 0; k < 3; ++k) origin[k] = box.center()[k] - (res[k] / 2 + 0.5) * vs;
  return {origin, vs};
}

}  // namespace clay
