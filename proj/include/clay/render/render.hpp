#pragma once

#include <cstdint>
#include <vector>

#include "clay/render/backward.hpp"
#include "clay/render/raster_dib.hpp"
#include "clay/render/raster_hard.hpp"
#include "clay/render/raster_soft.hpp"

namespace clay {

/// transform -> project -> rasterize -> shade with the pipeline's rasterizer.
inline RenderOutput render(const RenderPipeline& pipe, const TriangleMesh& mesh, const Material& mat = Material{}) {
  pipe.validate();
  const ProjectedMesh pm = project_mesh(pipe.camera, mesh);
  const FragmentShader shader(pipe, mesh, mat, pm);
  switch (pipe.rasterizer) {
    case RasterizerKind::Hard:
      return detail::shade_coverage(rasterize_coverage(pm, mesh.faces, pipe.width(), pipe.height()), shader,
                                    pipe.background);
    case RasterizerKind::Soft:
      return soft_forward(pipe, mesh, pm, shader).output;
    case RasterizerKind::Dib:
      return dib_forward(pipe, mesh, pm, shader).output;
  }
  return {};
}

inline void check_render_vjp_supported(const RenderPipeline& pipe, const TriangleMesh& mesh) {
  if (pipe.rasterizer == RasterizerKind::Hard) {
    throw UnsupportedGradientError("the hard rasterizer has no gradient; use Soft or Dib");
  }
  if (pipe.shader != ShaderKind::Unlit && pipe.shader != ShaderKind::Lambertian) {
    throw UnsupportedGradientError("gradients are available for Unlit and Lambertian shading only");
  }
  if (pipe.shader == ShaderKind::Lambertian && mesh.has_normals()) {
    throw UnsupportedGradientError("Lambertian gradients use face normals; drop vertex_normals");
  }
}

/// Gradients of <upstream, render(...)> wrt world vertex positions and vertex colors.
inline RenderGradient render_vjp(const RenderPipeline& pipe, const TriangleMesh& mesh, const Material& mat,
                                 const RenderUpstream& up) {
  pipe.validate();
  check_render_vjp_supported(pipe, mesh);
  const int W = pipe.width(), H = pipe.height();
  if (up.color.width != W || up.color.height != H || up.color.channels != 3 || up.alpha.width != W ||
      up.alpha.height != H || up.alpha.channels != 1) {
    throw DomainError("upstream image shapes do not match the render size");
  }
  const ProjectedMesh pm = project_mesh(pipe.camera, mesh);
  const FragmentShader shader(pipe, mesh, mat, pm);
  if (pipe.rasterizer == RasterizerKind::Soft) {
    const SoftForward sf = soft_forward(pipe, mesh, pm, shader);
    const auto grads = detail::soft_backward(pipe, mesh, mat, pm, sf, up);
    return detail::project_backward(pipe, mesh, pm, grads, sf.params.lo_vertex, sf.params.hi_vertex);
  }
  const DibForward df = dib_forward(pipe, mesh, pm, shader);
  const auto grads = detail::dib_backward(pipe, mesh, mat, pm, df, up);
  return detail::project_backward(pipe, mesh, pm, grads, -1, -1);
}

namespace detail {

inline void hash_mix(std::uint64_t& h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

}  // namespace detail

/// Hash of every discrete choice the render gradient is piecewise-smooth in:
/// pixel owners, nearest edges, barycentric clamp states and the depth
/// normalization vertices. Equal hashes mean the same smooth piece.
inline std::uint64_t render_signature(const RenderPipeline& pipe, const TriangleMesh& mesh) {
  pipe.validate();
  const ProjectedMesh pm = project_mesh(pipe.camera, mesh);
  std::uint64_t h = 1469598103934665603ULL;
  for (char r : pm.face_rendered) detail::hash_mix(h, static_cast<std::uint64_t>(r));
  if (pipe.rasterizer == RasterizerKind::Soft) {
    const auto P = detail::soft_params(pm, mesh.faces, pipe.soft);
    const auto faces = detail::soft_faces(pm, mesh.faces, pipe.soft.sigma, pipe.width(), pipe.height());
    detail::hash_mix(h, static_cast<std::uint64_t>(P.lo_vertex));
    detail::hash_mix(h, static_cast<std::uint64_t>(P.hi_vertex));
    for (const auto& F : faces) {
      for (int y = F.y0; y <= F.y1; ++y) {
        for (int x = F.x0; x <= F.x1; ++x) {
          const auto e = detail::soft_eval(F, Vec2(x + 0.5, y + 0.5), P);
          if (!e.included || e.x < -40.0) continue;
          std::uint64_t code = static_cast<std::uint64_t>(e.edge) | (e.inside ? 4u : 0u);
          for (int k = 0; k < 3; ++k) code |= (e.free[k] ? 8u : 0u) << k;
          detail::hash_mix(h, (static_cast<std::uint64_t>(F.id) << 32) ^ (static_cast<std::uint64_t>(y) << 16) ^
                                  static_cast<std::uint64_t>(x));
          detail::hash_mix(h, code);
        }
      }
    }
  } else {
    const FragmentShader shader(pipe, mesh, Material{}, pm);
    const auto cov = rasterize_coverage(pm, mesh.faces, pipe.width(), pipe.height());
    for (auto f : cov.face_ids) detail::hash_mix(h, static_cast<std::uint64_t>(f));
    if (pipe.rasterizer == RasterizerKind::Dib) {
      const auto df = dib_forward(pipe, mesh, pm, shader);
      for (std::size_t i = 0; i < df.nearest_face.size(); ++i) {
        detail::hash_mix(h, static_cast<std::uint64_t>(df.nearest_face[i]));
        detail::hash_mix(h, static_cast<std::uint64_t>(df.nearest_edge[i]));
      }
    }
  }
  return h;
}

}  // namespace clay
