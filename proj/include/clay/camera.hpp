#pragma once

#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "clay/transform.hpp"
#include "clay/types.hpp"

namespace clay {

// Camera space: x right, y down, z forward. Pixel (0, 0) is the top-left
// pixel and pixel (i, j) has its center at (i + 0.5, j + 0.5).

struct Pinhole {
  double fx = 1.0, fy = 1.0, cx = 0.0, cy = 0.0;
};

struct Orthographic {
  double scale_x = 1.0, scale_y = 1.0;  // world units per pixel
  double cx = 0.0, cy = 0.0;
};

using Intrinsics = std::variant<Pinhole, Orthographic>;

/// Points closer than this along +z are not projected by a pinhole camera.
inline constexpr double kMinProjectDepth = 1e-9;

struct Camera {
  RigidTransform extrinsics;  // world -> camera
  Intrinsics intrinsics = Pinhole{};
  int width = 1;
  int height = 1;

  Camera() = default;
  Camera(RigidTransform world_to_camera, Intrinsics k, int w, int h)
      : extrinsics(std::move(world_to_camera)), intrinsics(k), width(w), height(h) {
    validate();
  }

  /// Pinhole camera with the principal point at the image center.
  static Camera perspective(const RigidTransform& world_to_camera, int w, int h, double focal) {
    return {world_to_camera, Pinhole{focal, focal, 0.5 * w, 0.5 * h}, w, h};
  }

  static Camera orthographic(const RigidTransform& world_to_camera, int w, int h, double scale) {
    return {world_to_camera, Orthographic{scale, scale, 0.5 * w, 0.5 * h}, w, h};
  }

  bool is_perspective() const { return std::holds_alternative<Pinhole>(intrinsics); }

  void validate() const {
    if (width < 1 || height < 1) throw DomainError("camera image size must be at least 1x1");
    if (const auto* p = std::get_if<Pinhole>(&intrinsics)) {
      if (!(p->fx > 0.0 && p->fy > 0.0)) throw DomainError("pinhole focal lengths must be positive");
    } else {
      const auto& o = std::get<Orthographic>(intrinsics);
      if (!(o.scale_x > 0.0 && o.scale_y > 0.0)) {
        throw DomainError("orthographic scales must be positive");
      }
    }
  }
};

struct Projection {
  double u = 0.0, v = 0.0, depth = 0.0;
  bool valid = false;
};

/// Camera-space point to (u, v, z). Pinhole points with z <= 1e-9 are marked invalid.
inline Projection project_camera_point(const Intrinsics& k, const Vec3& pc) {
  if (const auto* p = std::get_if<Pinhole>(&k)) {
    if (!(pc.z() > kMinProjectDepth)) return {0.0, 0.0, pc.z(), false};
    return {p->fx * pc.x() / pc.z() + p->cx, p->fy * pc.y() / pc.z() + p->cy, pc.z(), true};
  }
  const auto& o = std::get<Orthographic>(k);
  return {pc.x() / o.scale_x + o.cx, pc.y() / o.scale_y + o.cy, pc.z(), true};
}

inline std::vector<Projection> project_points(const Camera& cam, std::span<const Vec3> world) {
  std::vector<Projection> out(world.size());
  const auto n = static_cast<std::ptrdiff_t>(world.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = project_camera_point(cam.intrinsics, cam.extrinsics.apply(world[i]));
  }
  return out;
}

/// Camera-space point seen at continuous pixel coordinate (u, v) with depth z.
inline Vec3 unproject_camera(const Intrinsics& k, double u, double v, double z) {
  if (const auto* p = std::get_if<Pinhole>(&k)) {
    return {(u - p->cx) * z / p->fx, (v - p->cy) * z / p->fy, z};
  }
  const auto& o = std::get<Orthographic>(k);
  return {(u - o.cx) * o.scale_x, (v - o.cy) * o.scale_y, z};
}

inline Vec3 unproject(const Camera& cam, double u, double v, double depth) {
  return cam.extrinsics.inverse().apply(unproject_camera(cam.intrinsics, u, v, depth));
}

/// Camera-space z per pixel; kNoHit marks pixels that saw nothing.
struct DepthMap {
  static constexpr double kNoHit = std::numeric_limits<double>::infinity();

  Camera camera;
  std::vector<double> depths;  // row-major, height x width

  DepthMap() = default;
  explicit DepthMap(Camera cam)
      : camera(std::move(cam)),
        depths(static_cast<std::size_t>(camera.width) * camera.height, kNoHit) {}

  int width() const { return camera.width; }
  int height() const { return camera.height; }
  double& at(int x, int y) { return depths[static_cast<std::size_t>(y) * width() + x]; }
  double at(int x, int y) const { return depths[static_cast<std::size_t>(y) * width() + x]; }
  static bool is_hit(double d) { return d != kNoHit; }

  void validate() const {
    if (depths.size() != static_cast<std::size_t>(width()) * height()) {
      throw DomainError("depth buffer size does not match the camera image size");
    }
    for (double d : depths) {
      if (!is_hit(d)) continue;
      if (!std::isfinite(d)) throw DomainError("non-finite depth");
      if (camera.is_perspective() && !(d > 0.0)) {
        throw DomainError("perspective depth must be positive");
      }
    }
  }
};

/// One world-space point per hit pixel, taken at the pixel center, in row-major order.
inline PointCloud backproject_depth(const DepthMap& dm) {
  dm.validate();
  const RigidTransform to_world = dm.camera.extrinsics.inverse();
  PointCloud out;
  for (int y = 0; y < dm.height(); ++y) {
    for (int x = 0; x < dm.width(); ++x) {
      const double d = dm.at(x, y);
      if (!DepthMap::is_hit(d)) continue;
      out.points.push_back(
          to_world.apply(unproject_camera(dm.camera.intrinsics, x + 0.5, y + 0.5, d)));
    }
  }
  return out;
}

}  // namespace clay
