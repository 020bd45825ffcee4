#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "clay/render/fragment.hpp"
#include "clay/render/geometry2d.hpp"
#include "clay/render/stages.hpp"

namespace clay {

/// Z-buffer result: owning face, camera depth and the owner's
/// perspective-correct weights (in the face's own corner order) per pixel.
struct Coverage {
  int width = 0, height = 0;
  std::vector<std::int32_t> face_ids;
  std::vector<double> depth;
  std::vector<Vec3> weights;

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

namespace detail {

struct HardFace {
  std::array<Vec2, 3> p;          // positively oriented corners
  std::array<int, 3> corner;      // original corner index of p[k]
  std::array<bool, 3> top_left;   // edge opposite p[k]
  Vec3 q;                         // inverse depth per p[k]
  int x0, x1, y0, y1;
};

inline bool is_top_left(const Vec2& from, const Vec2& to) {
  const double dx = to.x() - from.x(), dy = to.y() - from.y();
  return (dy == 0.0 && dx > 0.0) || dy < 0.0;
}

}  // namespace detail

/// Pixel centers strictly inside a projected triangle are covered; centers on
/// an edge are covered only for top and left edges. Both windings are drawn.
/// Nearest depth wins; equal depths keep the lower face index.
inline Coverage rasterize_coverage(const ProjectedMesh& pm, std::span<const Face> faces, int width, int height) {
  Coverage cov;
  cov.width = width;
  cov.height = height;
  const std::size_t npx = static_cast<std::size_t>(width) * height;
  cov.face_ids.assign(npx, -1);
  cov.depth.assign(npx, std::numeric_limits<double>::infinity());
  cov.weights.assign(npx, Vec3::Zero());

  std::vector<detail::HardFace> prepared(faces.size());
  std::vector<std::int32_t> active;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (!pm.face_rendered[f]) continue;
    auto& h = prepared[f];
    std::array<int, 3> order{0, 1, 2};
    const auto& t = faces[f];
    if (detail::edge_function(pm.screen[t[0]], pm.screen[t[1]], pm.screen[t[2]]) < 0.0) std::swap(order[1], order[2]);
    Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
    for (int k = 0; k < 3; ++k) {
      h.corner[k] = order[k];
      h.p[k] = pm.screen[t[order[k]]];
      h.q[k] = pm.inv_depth[t[order[k]]];
      lo = lo.cwiseMin(h.p[k]);
      hi = hi.cwiseMax(h.p[k]);
    }
    for (int k = 0; k < 3; ++k) h.top_left[k] = detail::is_top_left(h.p[(k + 1) % 3], h.p[(k + 2) % 3]);
    // Pixel x covers center x + 0.5.
    h.x0 = std::max(0, static_cast<int>(std::ceil(lo.x() - 0.5)));
    h.x1 = std::min(width - 1, static_cast<int>(std::floor(hi.x() - 0.5)));
    h.y0 = std::max(0, static_cast<int>(std::ceil(lo.y() - 0.5)));
    h.y1 = std::min(height - 1, static_cast<int>(std::floor(hi.y() - 0.5)));
    if (h.x0 <= h.x1 && h.y0 <= h.y1) active.push_back(static_cast<std::int32_t>(f));
  }

#pragma omp parallel for schedule(dynamic, 4)
  for (int y = 0; y < height; ++y) {
    for (auto f : active) {
      const auto& h = prepared[f];
      if (y < h.y0 || y > h.y1) continue;
      for (int x = h.x0; x <= h.x1; ++x) {
        const Vec2 c(x + 0.5, y + 0.5);
        Vec3 w;
        bool inside = true;
        for (int k = 0; k < 3 && inside; ++k) {
          w[k] = detail::edge_function(h.p[(k + 1) % 3], h.p[(k + 2) % 3], c);
          inside = w[k] > 0.0 || (w[k] == 0.0 && h.top_left[k]);
        }
        if (!inside) continue;
        const Vec3 lambda = w / w.sum();
        double z;
        if (pm.perspective) {
          z = 1.0 / lambda.dot(h.q);
        } else {
          z = -lambda.dot(h.q);
        }
        const std::size_t i = cov.index(x, y);
        if (!(z < cov.depth[i])) continue;
        const Vec3 pw = perspective_weights(lambda, h.q, pm.perspective);
        Vec3 ordered;
        for (int k = 0; k < 3; ++k) ordered[h.corner[k]] = pw[k];
        cov.depth[i] = z;
        cov.face_ids[i] = f;
        cov.weights[i] = ordered;
      }
    }
  }
  return cov;
}

namespace detail {

inline RenderOutput shade_coverage(const Coverage& cov, const FragmentShader& shader, const Vec3& background) {
  RenderOutput out;
  out.color = Image(cov.width, cov.height, 3);
  out.alpha = Image(cov.width, cov.height, 1);
  out.depth = Image(cov.width, cov.height, 1);
  out.face_ids = cov.face_ids;
  for (int y = 0; y < cov.height; ++y) {
    for (int x = 0; x < cov.width; ++x) {
      const std::size_t i = cov.index(x, y);
      out.depth.at(x, y) = cov.depth[i];
      const Vec3 c = cov.face_ids[i] < 0 ? background : shader(cov.face_ids[i], cov.weights[i]);
      for (int k = 0; k < 3; ++k) out.color.at(x, y, k) = c[k];
      out.alpha.at(x, y) = cov.face_ids[i] < 0 ? 0.0 : 1.0;
    }
  }
  return out;
}

}  // namespace detail

inline RenderOutput rasterize_hard(const RenderPipeline& pipe, const TriangleMesh& mesh,
                                   const Material& mat = Material{}) {
  pipe.validate();
  const ProjectedMesh pm = project_mesh(pipe.camera, mesh);
  const FragmentShader shader(pipe, mesh, mat, pm);
  return detail::shade_coverage(rasterize_coverage(pm, mesh.faces, pipe.width(), pipe.height()), shader,
                                pipe.background);
}

}  // namespace clay
