#pragma once

#include <span>
#include <vector>

#include "clay/types.hpp"

namespace clay {

enum class Axis { X = 0, Y = 1, Z = 2 };
/// Positive: rays enter at index 0 and travel toward higher indices.
enum class Direction { Positive, Negative };

/// Orthographic depth map of a voxel grid along one axis. Image axes are the
/// two remaining grid axes in cyclic order (X: y,z; Y: z,x; Z: x,y).
/// depth(u, v) counts empty cells before the first occupied one; res_w means no hit.
struct Odm {
  Axis axis = Axis::Z;
  Direction direction = Direction::Positive;
  int res_u = 0, res_v = 0, res_w = 0;
  std::vector<int> depths;

  int& at(int u, int v) { return depths[static_cast<std::size_t>(v) * res_u + u]; }
  int at(int u, int v) const { return depths[static_cast<std::size_t>(v) * res_u + u]; }
};

namespace detail {

struct OdmFrame {
  int w, u, v;  // grid axis for ray, image u, image v
};

inline OdmFrame odm_frame(Axis axis) {
  const int w = static_cast<int>(axis);
  return {w, (w + 1) % 3, (w + 2) % 3};
}

inline std::array<int, 3> odm_cell(const OdmFrame& fr, int u, int v, int step, int res_w, Direction dir) {
  std::array<int, 3> c{};
  c[fr.u] = u;
  c[fr.v] = v;
  c[fr.w] = dir == Direction::Positive ? step : res_w - 1 - step;
  return c;
}

}  // namespace detail

inline Odm voxel_to_odm(const VoxelGrid& vox, Axis axis, Direction direction, double threshold = 0.5) {
  const auto fr = detail::odm_frame(axis);
  Odm odm;
  odm.axis = axis;
  odm.direction = direction;
  odm.res_u = vox.resolution[fr.u];
  odm.res_v = vox.resolution[fr.v];
  odm.res_w = vox.resolution[fr.w];
  odm.depths.assign(static_cast<std::size_t>(odm.res_u) * odm.res_v, odm.res_w);
  for (int v = 0; v < odm.res_v; ++v) {
    for (int u = 0; u < odm.res_u; ++u) {
      for (int s = 0; s < odm.res_w; ++s) {
        const auto c = detail::odm_cell(fr, u, v, s, odm.res_w, direction);
        if (vox.at(c[0], c[1], c[2]) >= threshold) {
          odm.at(u, v) = s;
          break;
        }
      }
    }
  }
  return odm;
}

/// The six axis-aligned ODMs (X+, X-, Y+, Y-, Z+, Z-).
inline std::vector<Odm> voxel_to_odms(const VoxelGrid& vox, double threshold = 0.5) {
  std::vector<Odm> out;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    for (Direction d : {Direction::Positive, Direction::Negative}) out.push_back(voxel_to_odm(vox, a, d, threshold));
  }
  return out;
}

/// Clears every cell that some ODM ray passes through before its first hit.
inline VoxelGrid odm_carve(const VoxelGrid& vox, std::span<const Odm> odms) {
  for (const auto& odm : odms) {
    const auto fr = detail::odm_frame(odm.axis);
    if (odm.res_u != vox.resolution[fr.u] || odm.res_v != vox.resolution[fr.v] ||
        odm.res_w != vox.resolution[fr.w] || odm.depths.size() != static_cast<std::size_t>(odm.res_u) * odm.res_v) {
      throw DomainError("ODM resolution does not match the voxel grid");
    }
    for (int d : odm.depths) {
      if (d < 0 || d > odm.res_w) throw DomainError("ODM depth outside [0, res_w]");
    }
  }
  VoxelGrid out = vox;
  for (const auto& odm : odms) {
    const auto fr = detail::odm_frame(odm.axis);
    for (int v = 0; v < odm.res_v; ++v) {
      for (int u = 0; u < odm.res_u; ++u) {
        const int depth = odm.at(u, v);
        for (int s = 0; s < depth; ++s) {
          const auto c = detail::odm_cell(fr, u, v, s, odm.res_w, odm.direction);
          out.at(c[0], c[1], c[2]) = 0.0;
        }
      }
    }
  }
  return out;
}

}  // namespace clay
