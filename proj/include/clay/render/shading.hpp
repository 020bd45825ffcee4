#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "clay/render/types.hpp"
#include "clay/transform.hpp"

namespace clay {

/// Lights with directions rotated into the camera frame.
inline std::vector<Light> lights_in_camera(std::span<const Light> lights, const RigidTransform& world_to_camera) {
  std::vector<Light> out(lights.begin(), lights.end());
  for (auto& l : out) {
    if (l.kind == Light::Kind::Directional) l.direction = world_to_camera.apply_vector(l.direction);
  }
  return out;
}

/// ambient + sum over directional lights of color * max(0, n.l).
inline Vec3 lambert_factor(const Vec3& n, std::span<const Light> lights) {
  Vec3 f = Vec3::Zero();
  for (const auto& l : lights) {
    if (l.kind == Light::Kind::Ambient) {
      f += l.color;
    } else {
      f += l.color * std::max(0.0, n.dot(l.direction));
    }
  }
  return f;
}

/// Gradient of g . lambert_factor(n) wrt n.
inline Vec3 lambert_factor_backward(const Vec3& n, std::span<const Light> lights, const Vec3& g) {
  Vec3 gn = Vec3::Zero();
  for (const auto& l : lights) {
    if (l.kind == Light::Kind::Directional && n.dot(l.direction) > 0.0) gn += g.dot(l.color) * l.direction;
  }
  return gn;
}

/// Shades one surface point. n: unit normal; view: unit vector toward the
/// viewer; lights: same frame as n.
inline Vec3 shade(ShaderKind kind, const Vec3& n, const Vec3& view, std::span<const Light> lights,
                  const Vec3& albedo) {
  switch (kind) {
    case ShaderKind::Unlit:
      return albedo;
    case ShaderKind::Lambertian:
      return albedo.cwiseProduct(lambert_factor(n, lights));
    case ShaderKind::Phong: {
      Vec3 c = albedo.cwiseProduct(lambert_factor(n, lights));
      for (const auto& l : lights) {
        if (l.kind != Light::Kind::Directional) continue;
        const Vec3 r = -l.direction + 2.0 * n.dot(l.direction) * n;
        c += l.specular_color * std::pow(std::max(0.0, r.dot(view)), l.shininess);
      }
      return c;
    }
    case ShaderKind::Cosine: {
      double s = 0.0;
      for (const auto& l : lights) {
        if (l.kind == Light::Kind::Directional) s += std::max(0.0, n.dot(l.direction));
      }
      return Vec3::Constant(s);
    }
  }
  return albedo;
}

}  // namespace clay
