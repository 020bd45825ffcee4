#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clay/gradcheck/check.hpp"
#include "clay/gradcheck/ops.hpp"
#include "clay/gradcheck/scenes.hpp"
#include "clay/shapes.hpp"

namespace clay {

/// One named op at a default configuration, with the tolerance it must meet.
struct GradCheckCase {
  DiffOp op;
  Vector input;
  double tol = 1e-6;
  std::optional<double> eps;
  int probes = 16;
};

inline const std::vector<std::string>& gradcheck_op_names() {
  static const std::vector<std::string> names{"transform_points", "sample_points", "chamfer",
                                              "point_to_surface",  "laplacian",     "edge_length",
                                              "smoothness",        "rasterize_soft", "rasterize_dib"};
  return names;
}

/// Number of independent configurations checked by run_gradcheck.
inline int gradcheck_default_instances(const std::string& name) {
  return name == "rasterize_soft" || name == "rasterize_dib" ? 20 : 3;
}

namespace detail {

inline std::vector<Vec3> uniform_points(const CounterRng& rng, std::uint64_t stream, std::size_t n, const Vec3& lo,
                                        const Vec3& hi) {
  std::vector<Vec3> out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) out[i][k] = lo[k] + (hi[k] - lo[k]) * rng.uniform(3 * i + k, stream);
  return out;
}

inline TriangleMesh jittered_sphere(const CounterRng& rng, int level) {
  TriangleMesh m = shapes::icosphere(level);
  m.vertex_normals.clear();
  const auto noise = uniform_points(rng, 99, m.num_vertices(), Vec3::Constant(-0.08), Vec3::Constant(0.08));
  for (std::size_t i = 0; i < m.num_vertices(); ++i) m.vertices[i] += noise[i];
  return m;
}

}  // namespace detail

/// Default configuration of a registered op; `seed` varies the random data.
inline GradCheckCase gradcheck_case(const std::string& name, std::uint64_t seed) {
  const CounterRng rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  GradCheckCase c;
  if (name == "transform_points") {
    const auto pts = detail::uniform_points(rng, 0, 40, Vec3::Constant(-2), Vec3::Constant(2));
    const Vec3 w = detail::uniform_points(rng, 1, 1, Vec3::Constant(-2), Vec3::Constant(2))[0];
    c.op = transform_points_op(RigidTransform(exp_so3(w), Vec3(0.5, -1.0, 2.0)), pts.size());
    c.input = flatten(pts);
    c.tol = 1e-6;
  } else if (name == "sample_points") {
    const TriangleMesh m = detail::jittered_sphere(rng, 1);
    c.op = sample_points_op(m.faces, m.num_vertices(), sample_points_on_mesh(m, 200, seed));
    c.input = flatten(m.vertices);
    c.tol = 1e-6;
  } else if (name == "chamfer") {
    const auto a = detail::uniform_points(rng, 0, 40, Vec3::Zero(), Vec3::Ones());
    const auto b = detail::uniform_points(rng, 1, 30, Vec3(0.3, 0.2, 0.1), Vec3(1.5, 1.2, 1.1));
    c.op = chamfer_op(a.size(), b.size());
    c.input.resize(static_cast<Eigen::Index>(3 * (a.size() + b.size())));
    c.input << flatten(a), flatten(b);
    c.tol = 1e-6;
  } else if (name == "point_to_surface") {
    const TriangleMesh m = shapes::icosphere(2);
    const auto pts = detail::uniform_points(rng, 0, 60, Vec3::Constant(-1.4), Vec3::Constant(1.4));
    c.op = point_to_surface_op(m, pts.size());
    c.input = flatten(pts);
    c.tol = 1e-6;
  } else if (name == "laplacian" || name == "edge_length" || name == "smoothness") {
    const TriangleMesh m = detail::jittered_sphere(rng, 1);
    const Regularizer kind = name == "laplacian"     ? Regularizer::Laplacian
                             : name == "edge_length" ? Regularizer::EdgeLength
                                                     : Regularizer::Smoothness;
    c.op = regularizer_op(kind, m);
    c.input = flatten(m.vertices);
    c.tol = 1e-5;
  } else if (name == "rasterize_soft" || name == "rasterize_dib") {
    const auto raster = name == "rasterize_soft" ? RasterizerKind::Soft : RasterizerKind::Dib;
    const auto shader = seed % 2 ? ShaderKind::Lambertian : ShaderKind::Unlit;
    const RenderScene s = random_render_scene(1000 + seed, 1 + static_cast<int>(seed % 8), 32, raster, shader);
    c.op = render_op(s.pipeline, s.mesh, s.material);
    c.input.resize(static_cast<Eigen::Index>(6 * s.mesh.num_vertices()));
    c.input << flatten(s.mesh.vertices), flatten(s.mesh.vertex_colors);
    c.tol = 1e-3;
    c.probes = 12;
  } else {
    throw ConfigError("unknown gradcheck op '" + name + "'");
  }
  return c;
}

/// Probes `instances` seeded configurations and merges the reports; the 20%
/// skip limit applies to the merged report.
inline FdReport run_gradcheck(const std::string& name, std::optional<double> tol = {},
                              std::optional<int> instances = {}) {
  FdReport total;
  total.op = name;
  const int count = instances.value_or(gradcheck_default_instances(name));
  if (count < 1) throw ConfigError("gradcheck needs at least one instance");
  for (int i = 0; i < count; ++i) {
    const GradCheckCase c = gradcheck_case(name, static_cast<std::uint64_t>(i));
    const FdReport r = probe_vjp(c.op, c.input, c.probes, c.eps, tol.value_or(c.tol), static_cast<std::uint64_t>(i));
    total.tol = r.tol;
    total.eps = std::max(total.eps, r.eps);
    total.append(r);
  }
  require_conclusive(total);
  return total;
}

}  // namespace clay
