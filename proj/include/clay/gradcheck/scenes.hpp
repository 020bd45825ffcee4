#pragma once

#include <cstdint>

#include "clay/random.hpp"
#include "clay/render/types.hpp"
#include "clay/rotation.hpp"

namespace clay {

struct RenderScene {
  RenderPipeline pipeline;
  TriangleMesh mesh;
  Material material;
};

/// A few random colored triangles in front of a pinhole camera, with one
/// ambient and one directional light. Deterministic in seed.
inline RenderScene random_render_scene(std::uint64_t seed, int num_faces = 6, int size = 32,
                                       RasterizerKind raster = RasterizerKind::Soft,
                                       ShaderKind shader = ShaderKind::Unlit) {
  const CounterRng rng(seed);
  std::uint64_t ctr = 0;
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(ctr++, 0); };

  RenderScene s;
  s.pipeline.camera = Camera::perspective(RigidTransform::translation(Vec3(0, 0, 3)), size, size, 1.1 * size);
  s.pipeline.rasterizer = raster;
  s.pipeline.shader = shader;
  s.pipeline.background = Vec3(0.1, 0.2, 0.3);
  s.pipeline.lights = {Light::ambient(Vec3::Constant(0.2)),
                       Light::directional(Vec3(0.3, -0.4, -1.0), Vec3(0.9, 0.8, 0.7))};
  s.pipeline.soft = SoftSettings{2.0, 0.05, 1e-3};
  s.pipeline.dib_delta = 2.0;
  for (int f = 0; f < num_faces; ++f) {
    const Vec3 center(uni(-0.8, 0.8), uni(-0.8, 0.8), uni(-0.5, 0.5));
    const double radius = uni(0.2, 0.45);
    const Mat3 r = exp_so3(Vec3(uni(-0.6, 0.6), uni(-0.6, 0.6), uni(-3.1, 3.1)));
    const auto base = static_cast<std::int32_t>(s.mesh.vertices.size());
    for (int k = 0; k < 3; ++k) {
      const double a = 2.0943951023931953 * k + uni(-0.4, 0.4);
      s.mesh.vertices.push_back(center + r * Vec3(radius * std::cos(a), radius * std::sin(a), 0.0));
      s.mesh.vertex_colors.push_back(Vec3(uni(0, 1), uni(0, 1), uni(0, 1)));
    }
    s.mesh.faces.push_back({base, base + 1, base + 2});
  }
  return s;
}

}  // namespace clay
