#pragma once

#include <cstdint>
#include <vector>

#include "clay/camera.hpp"
#include "clay/types.hpp"

namespace clay {

enum class RasterizerKind { Hard, Soft, Dib };
enum class ShaderKind { Lambertian, Phong, Cosine, Unlit };

struct Light {
  enum class Kind { Ambient, Directional };

  Kind kind = Kind::Ambient;
  Vec3 color = Vec3::Ones();
  Vec3 direction = Vec3::UnitZ();  // unit, world space, pointing toward the light
  Vec3 specular_color = Vec3::Zero();
  double shininess = 1.0;

  static Light ambient(const Vec3& color) { return {Kind::Ambient, color, Vec3::UnitZ(), Vec3::Zero(), 1.0}; }

  static Light directional(const Vec3& toward_light, const Vec3& color = Vec3::Ones(),
                           const Vec3& specular = Vec3::Zero(), double shininess = 16.0) {
    if (!(toward_light.norm() > 0.0)) throw DomainError("light direction must be non-zero");
    return {Kind::Directional, color, toward_light.normalized(), specular, shininess};
  }

  void validate() const {
    if (kind == Kind::Directional && std::abs(direction.norm() - 1.0) > 1e-9) {
      throw DomainError("light direction must be normalized");
    }
    if (!(shininess > 0.0)) throw DomainError("light shininess must be positive");
  }
};

/// sigma: squared-pixel bandwidth of the coverage sigmoid. gamma: depth
/// softmax temperature over normalized inverse depth. background_weight_eps:
/// the background's logit (times gamma) in the depth softmax.
struct SoftSettings {
  double sigma = 1.0;
  double gamma = 1e-3;
  double background_weight_eps = 1e-3;

  void validate() const {
    if (!(sigma > 0.0 && gamma > 0.0 && background_weight_eps > 0.0)) {
      throw DomainError("soft rasterizer settings must be positive");
    }
  }
};

/// Used for faces when the mesh carries no vertex colors.
struct Material {
  Vec3 albedo = Vec3::Ones();
};

struct RenderPipeline {
  Camera camera;
  RasterizerKind rasterizer = RasterizerKind::Hard;
  ShaderKind shader = ShaderKind::Unlit;
  std::vector<Light> lights;
  Vec3 background = Vec3::Zero();
  SoftSettings soft;
  double dib_delta = 1.0;  // pixels

  int width() const { return camera.width; }
  int height() const { return camera.height; }

  void validate() const {
    camera.validate();
    soft.validate();
    if (!(dib_delta > 0.0)) throw DomainError("DIB alpha delta must be positive");
    for (const auto& l : lights) l.validate();
  }
};

struct RenderOutput {
  Image color;                       // H x W x 3
  Image alpha;                       // H x W x 1, in [0, 1]
  Image depth;                       // H x W x 1, camera z; +inf on background (hard and DIB)
  std::vector<std::int32_t> face_ids;  // H x W, -1 on background (hard and DIB)
};

/// Camera-space geometry after the transform and projection stages.
struct ProjectedMesh {
  std::vector<Vec3> camera_vertices;
  std::vector<Vec2> screen;       // (u, v) pixels
  std::vector<double> inv_depth;  // 1/z for pinhole, -z for orthographic: larger is nearer
  std::vector<Vec3> face_normals;  // unit, camera space; zero for degenerate faces
  std::vector<char> face_rendered;  // in front of the near plane with non-zero screen area
  bool perspective = true;
};

/// Pinhole faces with a vertex at z <= this are culled, not clipped.
inline constexpr double kNearPlane = 1e-4;
/// Projected triangles with |twice signed area| at or below this are skipped.
inline constexpr double kMinScreenArea2 = 1e-12;

}  // namespace clay
