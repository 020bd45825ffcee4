#pragma once

#include "clay/types.hpp"

namespace clay {

/// Intersection over union of the cells at or above threshold; 1 when both grids are empty.
inline double voxel_iou(const VoxelGrid& a, const VoxelGrid& b, double threshold = 0.5) {
  if (!a.same_shape(b)) throw DomainError("voxel_iou needs grids of equal resolution");
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const bool ia = a.values[i] >= threshold, ib = b.values[i] >= threshold;
    inter += ia && ib;
    uni += ia || ib;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace clay
