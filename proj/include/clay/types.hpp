#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "clay/error.hpp"

namespace clay {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Face = std::array<std::int32_t, 3>;

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  bool empty() const { return !(lo.array() <= hi.array()).all(); }

  void expand(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }

  void expand(const Aabb& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }

  Vec3 extent() const { return hi - lo; }
  Vec3 center() const { return 0.5 * (lo + hi); }

  int longest_axis() const {
    Vec3 e = extent();
    if (e.x() >= e.y() && e.x() >= e.z()) return 0;
    return e.y() >= e.z() ? 1 : 2;
  }

  bool contains(const Aabb& b) const {
    return (lo.array() <= b.lo.array()).all() && (b.hi.array() <= hi.array()).all();
  }

  /// Squared distance from p to the box (0 inside).
  double squared_distance(const Vec3& p) const {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      double d = std::max({lo[k] - p[k], 0.0, p[k] - hi[k]});
      d2 += d * d;
    }
    return d2;
  }
};

/// Indexed triangle set. Optional per-vertex attributes are absent when empty.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::vector<Vec3> vertex_colors;
  std::vector<Vec3> vertex_normals;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_faces() const { return faces.size(); }
  bool has_colors() const { return !vertex_colors.empty(); }
  bool has_normals() const { return !vertex_normals.empty(); }

  const Vec3& corner(std::size_t f, int k) const { return vertices[faces[f][k]]; }

  Vec3 face_cross(std::size_t f) const {
    return (corner(f, 1) - corner(f, 0)).cross(corner(f, 2) - corner(f, 0));
  }

  double face_area(std::size_t f) const { return 0.5 * face_cross(f).norm(); }

  Aabb bounds() const {
    Aabb b;
    for (const auto& v : vertices) b.expand(v);
    return b;
  }

  /// Throws DomainError when an invariant does not hold.
  void validate() const {
    const auto n = static_cast<std::int64_t>(vertices.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
      for (auto idx : faces[f]) {
        if (idx < 0 || idx >= n) {
          throw DomainError("face " + std::to_string(f) + " references vertex " +
                            std::to_string(idx) + " outside [0, " + std::to_string(n) + ")");
        }
      }
    }
    for (const auto& v : vertices) {
      if (!v.allFinite()) throw DomainError("non-finite vertex coordinate");
    }
    if (!vertex_colors.empty() && vertex_colors.size() != vertices.size()) {
      throw DomainError("vertex_colors length differs from vertex count");
    }
    if (!vertex_normals.empty() && vertex_normals.size() != vertices.size()) {
      throw DomainError("vertex_normals length differs from vertex count");
    }
  }
};

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;
  std::vector<Vec3> colors;

  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> pts) : points(std::move(pts)) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  Aabb bounds() const {
    Aabb b;
    for (const auto& p : points) b.expand(p);
    return b;
  }

  void validate() const {
    for (const auto& p : points) {
      if (!p.allFinite()) throw DomainError("non-finite point coordinate");
    }
    if (!normals.empty() && normals.size() != points.size()) {
      throw DomainError("normals length differs from point count");
    }
    if (!colors.empty() && colors.size() != points.size()) {
      throw DomainError("colors length differs from point count");
    }
  }
};

using Resolution = std::array<int, 3>;

struct OccupancyTag {};
struct DistanceTag {};

/// Uniform axis-aligned scalar grid. Cell (i, j, k) spans
/// origin + [i, i+1) * voxel_size along x (likewise y, z); values are stored
/// x-fastest and sampled at cell centers.
template <class Tag>
struct ScalarGrid {
  Resolution resolution{0, 0, 0};
  Vec3 origin = Vec3::Zero();
  double voxel_size = 1.0;
  std::vector<double> values;

  ScalarGrid() = default;
  ScalarGrid(Resolution res, Vec3 org, double size, double fill = 0.0)
      : resolution(res), origin(std::move(org)), voxel_size(size) {
    for (int r : res) {
      if (r <= 0) throw DomainError("grid resolution must be positive");
    }
    if (!(size > 0.0)) throw DomainError("voxel_size must be positive");
    values.assign(cell_count(), fill);
  }

  std::size_t cell_count() const {
    return static_cast<std::size_t>(resolution[0]) * resolution[1] * resolution[2];
  }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(resolution[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(resolution[1]) * k);
  }

  double& at(int i, int j, int k) { return values[index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[index(i, j, k)]; }

  Vec3 cell_center(int i, int j, int k) const {
    return origin + voxel_size * Vec3(i + 0.5, j + 0.5, k + 0.5);
  }

  Aabb cell_box(int i, int j, int k) const {
    Aabb b;
    b.lo = origin + voxel_size * Vec3(i, j, k);
    b.hi = b.lo + Vec3::Constant(voxel_size);
    return b;
  }

  bool same_shape(const ScalarGrid& other) const { return resolution == other.resolution; }
};

/// Occupancy in [0, 1].
using VoxelGrid = ScalarGrid<OccupancyTag>;
/// Signed distance in world units, negative inside.
using SdfGrid = ScalarGrid<DistanceTag>;

/// Dense row-major H x W x C real image; pixel (0, 0) is the top-left corner.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, int c, double fill = 0.0)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {}

  double& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

}  // namespace clay
