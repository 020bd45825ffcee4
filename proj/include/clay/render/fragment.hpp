#pragma once

#include <span>
#include <vector>

#include "clay/render/shading.hpp"
#include "clay/render/stages.hpp"

namespace clay {

/// Per-pixel shading of a point on one face, given the face's perspective-correct
/// barycentric weights. Shared by every rasterizer so their foregrounds agree.
class FragmentShader {
 public:
  FragmentShader(const RenderPipeline& pipe, const TriangleMesh& mesh, const Material& mat, const ProjectedMesh& pm)
      : kind_(pipe.shader), mesh_(mesh), mat_(mat), pm_(pm),
        lights_(lights_in_camera(pipe.lights, pipe.camera.extrinsics)) {
    if (mesh.has_normals()) {
      normals_.resize(mesh.num_vertices());
      for (std::size_t i = 0; i < normals_.size(); ++i) {
        normals_[i] = pipe.camera.extrinsics.apply_vector(mesh.vertex_normals[i]);
      }
    }
  }

  const std::vector<Light>& camera_lights() const { return lights_; }

  Vec3 albedo(std::int32_t f, const Vec3& w) const {
    const Face& t = mesh_.faces[f];
    return w[0] * vertex_albedo(mesh_, mat_, t[0]) + w[1] * vertex_albedo(mesh_, mat_, t[1]) +
           w[2] * vertex_albedo(mesh_, mat_, t[2]);
  }

  Vec3 normal(std::int32_t f, const Vec3& w) const {
    if (normals_.empty()) return pm_.face_normals[f];
    const Face& t = mesh_.faces[f];
    const Vec3 n = w[0] * normals_[t[0]] + w[1] * normals_[t[1]] + w[2] * normals_[t[2]];
    const double len = n.norm();
    return len > 0.0 ? Vec3(n / len) : pm_.face_normals[f];
  }

  Vec3 view(std::int32_t f, const Vec3& w) const {
    if (!pm_.perspective) return -Vec3::UnitZ();
    const Face& t = mesh_.faces[f];
    const Vec3 p = w[0] * pm_.camera_vertices[t[0]] + w[1] * pm_.camera_vertices[t[1]] +
                   w[2] * pm_.camera_vertices[t[2]];
    const double len = p.norm();
    return len > 0.0 ? Vec3(-p / len) : -Vec3::UnitZ();
  }

  Vec3 operator()(std::int32_t f, const Vec3& w) const {
    const Vec3 alb = albedo(f, w);
    if (kind_ == ShaderKind::Unlit) return alb;
    return shade(kind_, normal(f, w), view(f, w), lights_, alb);
  }

 private:
  ShaderKind kind_;
  const TriangleMesh& mesh_;
  const Material& mat_;
  const ProjectedMesh& pm_;
  std::vector<Light> lights_;
  std::vector<Vec3> normals_;
};

/// Perspective-correct weights from screen-space barycentrics.
inline Vec3 perspective_weights(const Vec3& lambda, const Vec3& q, bool perspective) {
  if (!perspective) return lambda;
  const Vec3 lq = lambda.cwiseProduct(q);
  return lq / lq.sum();
}

}  // namespace clay
