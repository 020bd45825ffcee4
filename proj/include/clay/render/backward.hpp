#pragma once

#include <array>
#include <cmath>
#include <span>
#include <variant>
#include <vector>

#include "clay/render/raster_dib.hpp"
#include "clay/render/raster_soft.hpp"

namespace clay {

/// Cotangents of a scalar loss wrt the rendered color (H x W x 3) and alpha (H x W x 1).
struct RenderUpstream {
  Image color;
  Image alpha;
};

struct RenderGradient {
  std::vector<Vec3> vertices;  // world-space positions
  std::vector<Vec3> colors;    // vertex colors; empty when the mesh has none
};

namespace detail {

/// Gradient of one face's contribution wrt its screen-space inputs.
struct FaceGrad {
  std::array<Vec2, 3> screen{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  Vec3 q = Vec3::Zero();
  std::array<Vec3, 3> albedo{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  Vec3 lambert = Vec3::Zero();
  double g_lo = 0.0, g_hi = 0.0;

  void add(const FaceGrad& o) {
    for (int k = 0; k < 3; ++k) {
      screen[k] += o.screen[k];
      albedo[k] += o.albedo[k];
    }
    q += o.q;
    lambert += o.lambert;
    g_lo += o.g_lo;
    g_hi += o.g_hi;
  }
};

/// Shading inputs of a face for the differentiable shaders (Unlit, Lambertian
/// with face normals): color = albedo(omega) * lambert.
struct FaceShade {
  std::array<Vec3, 3> albedo;
  Vec3 lambert;
};

inline FaceShade face_shade(const TriangleMesh& mesh, const Material& mat, const ProjectedMesh& pm,
                            std::span<const Light> cam_lights, ShaderKind kind, std::int32_t f) {
  FaceShade s;
  for (int k = 0; k < 3; ++k) s.albedo[k] = vertex_albedo(mesh, mat, mesh.faces[f][k]);
  s.lambert = kind == ShaderKind::Lambertian ? lambert_factor(pm.face_normals[f], cam_lights) : Vec3::Ones();
  return s;
}

/// Color cotangent gc at weights omega -> cotangent wrt omega (returned), albedo and lambert.
inline Vec3 color_backward(const FaceShade& s, const Vec3& omega, const Vec3& gc, FaceGrad& g) {
  const Vec3 alb = omega[0] * s.albedo[0] + omega[1] * s.albedo[1] + omega[2] * s.albedo[2];
  const Vec3 galb = gc.cwiseProduct(s.lambert);
  g.lambert += gc.cwiseProduct(alb);
  Vec3 gw;
  for (int k = 0; k < 3; ++k) {
    gw[k] = galb.dot(s.albedo[k]);
    g.albedo[k] += omega[k] * galb;
  }
  return gw;
}

/// omega = perspective_weights(lam, q): adds the cotangents of lam (returned) and q.
inline Vec3 weights_backward(const Vec3& lam, const Vec3& q, const Vec3& omega, const Vec3& gw, bool perspective,
                             FaceGrad& g) {
  if (!perspective) return gw;
  const double qp = lam.dot(q);
  const double big = gw.dot(omega);
  Vec3 gl;
  for (int k = 0; k < 3; ++k) {
    gl[k] = q[k] * (gw[k] - big) / qp;
    g.q[k] += lam[k] * (gw[k] - big) / qp;
  }
  return gl;
}

/// lam_k = area2(sub-triangle k) / area2(a, b, c).
inline void lambda_backward(const Vec2& px, const std::array<Vec2, 3>& p, double a2, const Vec3& lam, const Vec3& gl,
                            FaceGrad& g) {
  Vec2 sink = Vec2::Zero();
  area2_backward(px, p[1], p[2], gl[0] / a2, sink, g.screen[1], g.screen[2]);
  area2_backward(p[0], px, p[2], gl[1] / a2, g.screen[0], sink, g.screen[2]);
  area2_backward(p[0], p[1], px, gl[2] / a2, g.screen[0], g.screen[1], sink);
  area2_backward(p[0], p[1], p[2], -gl.dot(lam) / a2, g.screen[0], g.screen[1], g.screen[2]);
}

inline Vec3 upstream_color(const RenderUpstream& up, int x, int y) {
  return {up.color.at(x, y, 0), up.color.at(x, y, 1), up.color.at(x, y, 2)};
}

inline std::vector<FaceGrad> soft_backward(const RenderPipeline& pipe, const TriangleMesh& mesh, const Material& mat,
                                           const ProjectedMesh& pm, const SoftForward& sf,
                                           const RenderUpstream& up) {
  const auto lights = lights_in_camera(pipe.lights, pipe.camera.extrinsics);
  const auto& P = sf.params;
  std::vector<FaceGrad> grads(mesh.num_faces());
  const auto nf = static_cast<std::ptrdiff_t>(sf.faces.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t j = 0; j < nf; ++j) {
    const auto& F = sf.faces[j];
    const FaceShade sh = face_shade(mesh, mat, pm, lights, pipe.shader, F.id);
    FaceGrad& g = grads[F.id];
    for (int y = F.y0; y <= F.y1; ++y) {
      for (int x = F.x0; x <= F.x1; ++x) {
        const Vec2 px(x + 0.5, y + 0.5);
        const auto e = soft_eval(F, px, P);
        if (!e.included) continue;
        const std::size_t i = static_cast<std::size_t>(y) * pipe.width() + x;
        const Vec3 gcol = upstream_color(up, x, y);
        const double galpha = up.alpha.at(x, y);
        const Vec3 out(sf.output.color.at(x, y, 0), sf.output.color.at(x, y, 1), sf.output.color.at(x, y, 2));
        const Vec3 alb = e.omega[0] * sh.albedo[0] + e.omega[1] * sh.albedo[1] + e.omega[2] * sh.albedo[2];
        const Vec3 cj = alb.cwiseProduct(sh.lambert);
        const double w = std::exp(e.s - sf.log_norm[i]);

        const double gs = w * gcol.dot(cj - out);
        const double g_sil = galpha * std::exp(sf.log_transmit[i] - e.log_1md);
        const double gx = g_sil * std::exp(e.log_d + e.log_1md) + gs * std::exp(e.log_1md);
        const double gd2 = (e.inside ? gx : -gx) / P.sigma;
        segment_sq_distance_backward(px, e.seg, gd2, g.screen[e.edge], g.screen[(e.edge + 1) % 3]);

        Vec3 gl_hat = Vec3::Zero();
        if (P.q_range > 0.0) {
          const double gz = gs / P.gamma;
          const double gqp = gz / P.q_range;
          g.g_lo += gz * (e.zbar - 1.0) / P.q_range;
          g.g_hi -= gz * e.zbar / P.q_range;
          gl_hat += gqp * F.q;
          g.q += gqp * e.lhat;
        }
        const Vec3 gw = color_backward(sh, e.omega, w * gcol, g);
        gl_hat += weights_backward(e.lhat, F.q, e.omega, gw, P.perspective, g);
        // lhat = clamp(lambda) / sum
        const double dot = gl_hat.dot(e.lhat);
        Vec3 gl;
        for (int k = 0; k < 3; ++k) gl[k] = e.free[k] ? (gl_hat[k] - dot) / e.csum : 0.0;
        lambda_backward(px, F.p, F.area2, e.lambda, gl, g);
      }
    }
  }
  return grads;
}

inline std::vector<FaceGrad> dib_backward(const RenderPipeline& pipe, const TriangleMesh& mesh, const Material& mat,
                                          const ProjectedMesh& pm, const DibForward& df, const RenderUpstream& up) {
  const auto lights = lights_in_camera(pipe.lights, pipe.camera.extrinsics);
  const int W = pipe.width(), H = pipe.height();
  const std::size_t npx = static_cast<std::size_t>(W) * H;
  // One face per pixel: compute per-pixel records in parallel, reduce in pixel order.
  std::vector<FaceGrad> per_pixel(npx);
  std::vector<std::int32_t> owner(npx, -1);
#pragma omp parallel for schedule(dynamic, 2)
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const std::size_t i = df.coverage.index(x, y);
      const Vec2 px(x + 0.5, y + 0.5);
      FaceGrad& g = per_pixel[i];
      const std::int32_t f = df.coverage.face_ids[i];
      if (f >= 0) {
        const auto& t = mesh.faces[f];
        const std::array<Vec2, 3> p{pm.screen[t[0]], pm.screen[t[1]], pm.screen[t[2]]};
        const Vec3 q(pm.inv_depth[t[0]], pm.inv_depth[t[1]], pm.inv_depth[t[2]]);
        const double a2 = area2(p[0], p[1], p[2]);
        const Vec3 lam = Vec3(area2(px, p[1], p[2]), area2(p[0], px, p[2]), area2(p[0], p[1], px)) / a2;
        const Vec3 omega = perspective_weights(lam, q, pm.perspective);
        const FaceShade sh = face_shade(mesh, mat, pm, lights, pipe.shader, f);
        const Vec3 gw = color_backward(sh, omega, upstream_color(up, x, y), g);
        const Vec3 gl = weights_backward(lam, q, omega, gw, pm.perspective, g);
        lambda_backward(px, p, a2, lam, gl, g);
        owner[i] = f;
        continue;
      }
      const std::int32_t nf = df.nearest_face[i];
      const double d = df.distance[i];
      if (nf < 0 || d < 1e-12) continue;
      const double alpha = df.output.alpha.at(x, y);
      const double gd2 = up.alpha.at(x, y) * (-alpha / pipe.dib_delta) / (2.0 * d);
      const auto& t = mesh.faces[nf];
      const int e = df.nearest_edge[i];
      const auto sp = closest_on_segment(px, pm.screen[t[e]], pm.screen[t[(e + 1) % 3]]);
      segment_sq_distance_backward(px, sp, gd2, g.screen[e], g.screen[(e + 1) % 3]);
      owner[i] = nf;
    }
  }
  std::vector<FaceGrad> grads(mesh.num_faces());
  for (std::size_t i = 0; i < npx; ++i) {
    if (owner[i] >= 0) grads[owner[i]].add(per_pixel[i]);
  }
  return grads;
}

/// Screen-space face cotangents -> world vertex positions and vertex colors.
inline RenderGradient project_backward(const RenderPipeline& pipe, const TriangleMesh& mesh, const ProjectedMesh& pm,
                                       const std::vector<FaceGrad>& grads, std::int32_t lo_vertex,
                                       std::int32_t hi_vertex) {
  const std::size_t n = mesh.num_vertices();
  const auto lights = lights_in_camera(pipe.lights, pipe.camera.extrinsics);
  std::vector<Vec2> g_screen(n, Vec2::Zero());
  std::vector<double> g_q(n, 0.0);
  std::vector<Vec3> g_cam(n, Vec3::Zero());
  RenderGradient out;
  if (mesh.has_colors()) out.colors.assign(n, Vec3::Zero());
  double g_lo = 0.0, g_hi = 0.0;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const FaceGrad& g = grads[f];
    const auto& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      g_screen[t[k]] += g.screen[k];
      g_q[t[k]] += g.q[k];
      if (mesh.has_colors()) out.colors[t[k]] += g.albedo[k];
    }
    g_lo += g.g_lo;
    g_hi += g.g_hi;
    if (pipe.shader == ShaderKind::Lambertian && g.lambert != Vec3::Zero()) {
      const Vec3& a = pm.camera_vertices[t[0]];
      const Vec3 e1 = pm.camera_vertices[t[1]] - a, e2 = pm.camera_vertices[t[2]] - a;
      const Vec3 cr = e1.cross(e2);
      const double len = cr.norm();
      if (len > 0.0) {
        const Vec3 nrm = cr / len;
        const Vec3 gn = lambert_factor_backward(nrm, lights, g.lambert);
        const Vec3 gcr = (gn - nrm * nrm.dot(gn)) / len;
        const Vec3 g1 = e2.cross(gcr), g2 = gcr.cross(e1);
        g_cam[t[1]] += g1;
        g_cam[t[2]] += g2;
        g_cam[t[0]] -= g1 + g2;
      }
    }
  }
  if (lo_vertex >= 0) g_q[lo_vertex] += g_lo;
  if (hi_vertex >= 0) g_q[hi_vertex] += g_hi;

  for (std::size_t v = 0; v < n; ++v) {
    const Vec3& p = pm.camera_vertices[v];
    if (const auto* k = std::get_if<Pinhole>(&pipe.camera.intrinsics)) {
      if (!(p.z() > kNearPlane)) continue;
      const double iz = 1.0 / p.z();
      g_cam[v].x() += g_screen[v].x() * k->fx * iz;
      g_cam[v].y() += g_screen[v].y() * k->fy * iz;
      g_cam[v].z() += -(g_screen[v].x() * k->fx * p.x() + g_screen[v].y() * k->fy * p.y()) * iz * iz -
                      g_q[v] * iz * iz;
    } else {
      const auto& o = std::get<Orthographic>(pipe.camera.intrinsics);
      g_cam[v].x() += g_screen[v].x() / o.scale_x;
      g_cam[v].y() += g_screen[v].y() / o.scale_y;
      g_cam[v].z() -= g_q[v];
    }
  }
  out.vertices.resize(n);
  const Mat3& r = pipe.camera.extrinsics.rotation();
  for (std::size_t v = 0; v < n; ++v) out.vertices[v] = r.transpose() * g_cam[v];
  return out;
}

}  // namespace detail

}  // namespace clay
