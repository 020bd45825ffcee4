#pragma once

#include <span>
#include <variant>
#include <vector>

#include "clay/render/geometry2d.hpp"
#include "clay/render/types.hpp"

namespace clay {

/// World -> camera.
inline std::vector<Vec3> transform_stage(const Camera& cam, std::span<const Vec3> world) {
  std::vector<Vec3> out(world.size());
  for (std::size_t i = 0; i < world.size(); ++i) out[i] = cam.extrinsics.apply(world[i]);
  return out;
}

/// Camera space -> screen coordinates, inverse depth, face normals and culling.
inline ProjectedMesh project_stage(const Camera& cam, std::vector<Vec3> camera_vertices, std::span<const Face> faces) {
  ProjectedMesh pm;
  pm.perspective = cam.is_perspective();
  pm.camera_vertices = std::move(camera_vertices);
  const std::size_t n = pm.camera_vertices.size();
  pm.screen.resize(n);
  pm.inv_depth.resize(n);
  std::vector<char> in_front(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = pm.camera_vertices[i];
    if (const auto* k = std::get_if<Pinhole>(&cam.intrinsics)) {
      in_front[i] = p.z() > kNearPlane;
      const double z = in_front[i] ? p.z() : 1.0;
      pm.screen[i] = {k->fx * p.x() / z + k->cx, k->fy * p.y() / z + k->cy};
      pm.inv_depth[i] = 1.0 / z;
    } else {
      const auto& o = std::get<Orthographic>(cam.intrinsics);
      pm.screen[i] = {p.x() / o.scale_x + o.cx, p.y() / o.scale_y + o.cy};
      pm.inv_depth[i] = -p.z();
    }
  }
  pm.face_normals.resize(faces.size());
  pm.face_rendered.resize(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const auto& t = faces[f];
    const Vec3 cr = (pm.camera_vertices[t[1]] - pm.camera_vertices[t[0]])
                        .cross(pm.camera_vertices[t[2]] - pm.camera_vertices[t[0]]);
    const double len = cr.norm();
    pm.face_normals[f] = len > 0.0 ? Vec3(cr / len) : Vec3::Zero();
    const bool front = in_front[t[0]] && in_front[t[1]] && in_front[t[2]];
    pm.face_rendered[f] =
        front && std::abs(detail::area2(pm.screen[t[0]], pm.screen[t[1]], pm.screen[t[2]])) > kMinScreenArea2;
  }
  return pm;
}

inline ProjectedMesh project_mesh(const Camera& cam, const TriangleMesh& mesh) {
  mesh.validate();
  return project_stage(cam, transform_stage(cam, mesh.vertices), mesh.faces);
}

/// Per-vertex albedo: vertex colors when present, else the material albedo.
inline Vec3 vertex_albedo(const TriangleMesh& mesh, const Material& mat, std::int32_t v) {
  return mesh.has_colors() ? mesh.vertex_colors[v] : mat.albedo;
}

}  // namespace clay
