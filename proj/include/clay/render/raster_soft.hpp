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

/// Faces farther outside a pixel than d^2/sigma = this are ignored (sigmoid < 2e-35).
inline constexpr double kSoftCutoff = 80.0;

namespace detail {

struct SoftFace {
  std::int32_t id = -1;
  std::array<Vec2, 3> p;
  Vec3 q;
  double area2 = 0.0;
  int x0 = 0, x1 = -1, y0 = 0, y1 = -1;
};

struct SoftParams {
  double sigma, gamma, eps;
  double q_lo, q_range;  // q_range == 0 marks a flat scene (zbar fixed at 1)
  std::int32_t lo_vertex, hi_vertex;
  bool perspective;
};

/// Everything the forward and backward passes need about one face at one pixel.
struct SoftEval {
  bool included = false;
  bool inside = false;
  Vec3 lambda;
  int edge = 0;
  SegmentPoint seg{};
  double x = 0, D = 0, log_d = 0, log_1md = 0;
  std::array<bool, 3> free{};  // lambda_k strictly inside (0, 1): clamp passes gradient
  double csum = 1.0;
  Vec3 lhat, omega;
  double qp = 0, zbar = 1, s = 0;
};

inline SoftEval soft_eval(const SoftFace& F, const Vec2& px, const SoftParams& P) {
  SoftEval e;
  e.lambda = Vec3(area2(px, F.p[1], F.p[2]), area2(F.p[0], px, F.p[2]), area2(F.p[0], F.p[1], px)) / F.area2;
  e.inside = e.lambda.minCoeff() >= 0.0;
  e.seg = closest_on_segment(px, F.p[0], F.p[1]);
  for (int k = 1; k < 3; ++k) {
    const auto s = closest_on_segment(px, F.p[k], F.p[(k + 1) % 3]);
    if (s.sq_distance < e.seg.sq_distance) {
      e.seg = s;
      e.edge = k;
    }
  }
  const double r = e.seg.sq_distance / P.sigma;
  if (!e.inside && r > kSoftCutoff) return e;
  e.included = true;
  e.x = e.inside ? r : -r;
  e.D = sigmoid(e.x);
  e.log_d = -softplus(-e.x);
  e.log_1md = -softplus(e.x);

  Vec3 c;
  for (int k = 0; k < 3; ++k) {
    e.free[k] = e.lambda[k] > 0.0 && e.lambda[k] < 1.0;
    c[k] = std::clamp(e.lambda[k], 0.0, 1.0);
  }
  e.csum = c.sum();
  e.lhat = c / e.csum;
  e.qp = e.lhat.dot(F.q);
  e.zbar = P.q_range > 0.0 ? (e.qp - P.q_lo) / P.q_range : 1.0;
  e.s = e.log_d + e.zbar / P.gamma;
  e.omega = perspective_weights(e.lhat, F.q, P.perspective);
  return e;
}

inline SoftParams soft_params(const ProjectedMesh& pm, std::span<const Face> faces, const SoftSettings& s) {
  SoftParams P{s.sigma, s.gamma, s.background_weight_eps, 0.0, 0.0, -1, -1, pm.perspective};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (!pm.face_rendered[f]) continue;
    for (auto v : faces[f]) {
      const double q = pm.inv_depth[v];
      if (q < lo || (q == lo && v < P.lo_vertex)) {
        lo = q;
        P.lo_vertex = v;
      }
      if (q > hi || (q == hi && v < P.hi_vertex)) {
        hi = q;
        P.hi_vertex = v;
      }
    }
  }
  if (P.lo_vertex >= 0) {
    P.q_lo = lo;
    const double range = hi - lo;
    P.q_range = range > 1e-12 * std::max(1.0, std::abs(hi)) ? range : 0.0;
  }
  return P;
}

inline std::vector<SoftFace> soft_faces(const ProjectedMesh& pm, std::span<const Face> faces, double sigma,
                                        int width, int height) {
  std::vector<SoftFace> out;
  const double reach = std::sqrt(kSoftCutoff * sigma);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    if (!pm.face_rendered[f]) continue;
    SoftFace F;
    F.id = static_cast<std::int32_t>(f);
    Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
    for (int k = 0; k < 3; ++k) {
      F.p[k] = pm.screen[faces[f][k]];
      F.q[k] = pm.inv_depth[faces[f][k]];
      lo = lo.cwiseMin(F.p[k]);
      hi = hi.cwiseMax(F.p[k]);
    }
    F.area2 = area2(F.p[0], F.p[1], F.p[2]);
    lo.array() -= reach;
    hi.array() += reach;
    F.x0 = std::max(0, static_cast<int>(std::floor(lo.x() - 0.5)));
    F.x1 = std::min(width - 1, static_cast<int>(std::ceil(hi.x() - 0.5)));
    F.y0 = std::max(0, static_cast<int>(std::floor(lo.y() - 0.5)));
    F.y1 = std::min(height - 1, static_cast<int>(std::ceil(hi.y() - 0.5)));
    if (F.x0 <= F.x1 && F.y0 <= F.y1) out.push_back(F);
  }
  return out;
}

}  // namespace detail

/// Forward state kept for the backward pass.
struct SoftForward {
  RenderOutput output;
  std::vector<double> log_norm;      // log of the softmax denominator per pixel
  std::vector<double> log_transmit;  // sum_j log(1 - D_j) per pixel
  detail::SoftParams params{};
  std::vector<detail::SoftFace> faces;
};

/// Probabilistic aggregation of every face near each pixel.
inline SoftForward soft_forward(const RenderPipeline& pipe, const TriangleMesh& mesh, const ProjectedMesh& pm,
                                const FragmentShader& shader) {
  const int W = pipe.width(), H = pipe.height();
  SoftForward sf;
  sf.params = detail::soft_params(pm, mesh.faces, pipe.soft);
  sf.faces = detail::soft_faces(pm, mesh.faces, pipe.soft.sigma, W, H);
  sf.output.color = Image(W, H, 3);
  sf.output.alpha = Image(W, H, 1);
  const std::size_t npx = static_cast<std::size_t>(W) * H;
  sf.log_norm.assign(npx, 0.0);
  sf.log_transmit.assign(npx, 0.0);
  const auto& P = sf.params;
  const double s_bg = P.eps / P.gamma;

#pragma omp parallel
  {
    std::vector<double> s;
    std::vector<Vec3> c;
#pragma omp for schedule(dynamic, 2)
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const Vec2 px(x + 0.5, y + 0.5);
        s.clear();
        c.clear();
        double log_t = 0.0, m = s_bg;
        for (const auto& F : sf.faces) {
          if (x < F.x0 || x > F.x1 || y < F.y0 || y > F.y1) continue;
          const auto e = detail::soft_eval(F, px, P);
          if (!e.included) continue;
          log_t += e.log_1md;
          s.push_back(e.s);
          c.push_back(shader(F.id, e.omega));
          m = std::max(m, e.s);
        }
        double z = std::exp(s_bg - m);
        for (double v : s) z += std::exp(v - m);
        const double log_z = m + std::log(z);
        Vec3 color = std::exp(s_bg - log_z) * pipe.background;
        for (std::size_t j = 0; j < s.size(); ++j) color += std::exp(s[j] - log_z) * c[j];
        const std::size_t i = static_cast<std::size_t>(y) * W + x;
        sf.log_norm[i] = log_z;
        sf.log_transmit[i] = log_t;
        for (int k = 0; k < 3; ++k) sf.output.color.at(x, y, k) = color[k];
        sf.output.alpha.at(x, y) = -std::expm1(log_t);
      }
    }
  }
  return sf;
}

inline RenderOutput rasterize_soft(const RenderPipeline& pipe, const TriangleMesh& mesh, const SoftSettings& settings,
                                   const Material& mat = Material{}) {
  RenderPipeline p = pipe;
  p.soft = settings;
  p.validate();
  const ProjectedMesh pm = project_mesh(p.camera, mesh);
  const FragmentShader shader(p, mesh, mat, pm);
  return soft_forward(p, mesh, pm, shader).output;
}

/// Depth-softmax weights at one pixel: (face, weight) for every contributing
/// face plus the background weight. They sum to one.
struct SoftPixelWeights {
  std::vector<std::pair<std::int32_t, double>> faces;
  double background = 1.0;
};

inline SoftPixelWeights soft_pixel_weights(const RenderPipeline& pipe, const TriangleMesh& mesh, int x, int y) {
  pipe.validate();
  const ProjectedMesh pm = project_mesh(pipe.camera, mesh);
  const auto P = detail::soft_params(pm, mesh.faces, pipe.soft);
  const auto faces = detail::soft_faces(pm, mesh.faces, pipe.soft.sigma, pipe.width(), pipe.height());
  const Vec2 px(x + 0.5, y + 0.5);
  SoftPixelWeights out;
  const double s_bg = P.eps / P.gamma;
  double m = s_bg;
  std::vector<double> s;
  for (const auto& F : faces) {
    if (x < F.x0 || x > F.x1 || y < F.y0 || y > F.y1) continue;
    const auto e = detail::soft_eval(F, px, P);
    if (!e.included) continue;
    out.faces.emplace_back(F.id, 0.0);
    s.push_back(e.s);
    m = std::max(m, e.s);
  }
  double z = std::exp(s_bg - m);
  for (double v : s) z += std::exp(v - m);
  const double log_z = m + std::log(z);
  out.background = std::exp(s_bg - log_z);
  for (std::size_t j = 0; j < s.size(); ++j) out.faces[j].second = std::exp(s[j] - log_z);
  return out;
}

}  // namespace clay
