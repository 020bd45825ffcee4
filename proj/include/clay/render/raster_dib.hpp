#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "clay/render/raster_hard.hpp"

namespace clay {

/// Forward state kept for the backward pass.
struct DibForward {
  RenderOutput output;
  Coverage coverage;
  std::vector<std::int32_t> nearest_face;  // background pixels only, else -1
  std::vector<int> nearest_edge;
  std::vector<double> distance;
};

namespace detail {

struct NearestFace {
  std::int32_t face = -1;
  int edge = 0;
  double sq_distance = std::numeric_limits<double>::infinity();
};

/// Closest rendered projected triangle to a pixel center; 0 inside a triangle.
inline NearestFace nearest_projected_face(const ProjectedMesh& pm, std::span<const Face> faces,
                                          const std::vector<std::int32_t>& rendered,
                                          const std::vector<std::array<Vec2, 2>>& boxes, const Vec2& px) {
  NearestFace best;
  for (std::size_t r = 0; r < rendered.size(); ++r) {
    const auto f = rendered[r];
    const Vec2 gap = (boxes[r][0] - px).cwiseMax(px - boxes[r][1]).cwiseMax(Vec2::Zero());
    if (gap.squaredNorm() > best.sq_distance) continue;
    const auto& t = faces[f];
    const Vec2 &a = pm.screen[t[0]], &b = pm.screen[t[1]], &c = pm.screen[t[2]];
    double d2 = std::numeric_limits<double>::infinity();
    int edge = 0;
    for (int k = 0; k < 3; ++k) {
      const double s = closest_on_segment(px, pm.screen[t[k]], pm.screen[t[(k + 1) % 3]]).sq_distance;
      if (s < d2) {
        d2 = s;
        edge = k;
      }
    }
    const double A = area2(a, b, c);
    const Vec3 lam = Vec3(area2(px, b, c), area2(a, px, c), area2(a, b, px)) / A;
    if (lam.minCoeff() >= 0.0) d2 = 0.0;
    if (d2 < best.sq_distance) best = {f, edge, d2};
  }
  return best;
}

}  // namespace detail

/// Foreground exactly as the hard rasterizer; background alpha decays as
/// exp(-d / delta) with d the screen distance to the nearest projected face.
inline DibForward dib_forward(const RenderPipeline& pipe, const TriangleMesh& mesh, const ProjectedMesh& pm,
                              const FragmentShader& shader) {
  DibForward df;
  df.coverage = rasterize_coverage(pm, mesh.faces, pipe.width(), pipe.height());
  df.output = detail::shade_coverage(df.coverage, shader, pipe.background);
  const std::size_t npx = df.coverage.face_ids.size();
  df.nearest_face.assign(npx, -1);
  df.nearest_edge.assign(npx, 0);
  df.distance.assign(npx, 0.0);

  std::vector<std::int32_t> rendered;
  std::vector<std::array<Vec2, 2>> boxes;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    if (!pm.face_rendered[f]) continue;
    rendered.push_back(static_cast<std::int32_t>(f));
    const auto& t = mesh.faces[f];
    boxes.push_back({pm.screen[t[0]].cwiseMin(pm.screen[t[1]]).cwiseMin(pm.screen[t[2]]),
                     pm.screen[t[0]].cwiseMax(pm.screen[t[1]]).cwiseMax(pm.screen[t[2]])});
  }
  if (rendered.empty()) return df;
  const int W = pipe.width(), H = pipe.height();
#pragma omp parallel for schedule(dynamic, 2)
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const std::size_t i = df.coverage.index(x, y);
      if (df.coverage.face_ids[i] >= 0) continue;
      const auto nf = detail::nearest_projected_face(pm, mesh.faces, rendered, boxes, Vec2(x + 0.5, y + 0.5));
      df.nearest_face[i] = nf.face;
      df.nearest_edge[i] = nf.edge;
      df.distance[i] = std::sqrt(nf.sq_distance);
      df.output.alpha.at(x, y) = std::exp(-df.distance[i] / pipe.dib_delta);
    }
  }
  return df;
}

inline RenderOutput rasterize_dib(const RenderPipeline& pipe, const TriangleMesh& mesh, double alpha_delta,
                                  const Material& mat = Material{}) {
  RenderPipeline p = pipe;
  p.dib_delta = alpha_delta;
  p.validate();
  const ProjectedMesh pm = project_mesh(p.camera, mesh);
  const FragmentShader shader(p, mesh, mat, pm);
  return dib_forward(p, mesh, pm, shader).output;
}

}  // namespace clay
