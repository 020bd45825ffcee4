#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "clay/random.hpp"
#include "clay/types.hpp"

namespace clay {

/// Surface samples written as fixed barycentric combinations of mesh vertices.
/// Holding face_indices and barycentric fixed makes each point linear in the
/// vertex positions, which is what carries gradients back to the mesh.
struct SampledPoints {
  std::vector<Vec3> points;
  std::vector<std::int32_t> face_indices;
  std::vector<Vec3> barycentric;

  std::size_t size() const { return points.size(); }
};

/// Area-weighted face choice and square-root barycentric warp (uniform per
/// triangle). Sample i only depends on (seed, i).
inline SampledPoints sample_points_on_mesh(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample count must be at least 1");
  if (mesh.faces.empty()) throw DomainError("cannot sample a mesh with no faces");
  mesh.validate();

  std::vector<double> cdf(mesh.num_faces());
  double total = 0.0;
  std::int32_t last_positive = -1;
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const double a = mesh.face_area(f);
    total += a;
    cdf[f] = total;
    if (a > 0.0) last_positive = static_cast<std::int32_t>(f);
  }
  if (!(total > 0.0) || last_positive < 0) throw DomainError("every face of the mesh is degenerate");

  const CounterRng rng(seed);
  SampledPoints out;
  out.points.resize(n);
  out.face_indices.resize(n);
  out.barycentric.resize(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto ctr = static_cast<std::uint64_t>(i);
    const double pick = rng.uniform(ctr, 0) * total;
    auto f = static_cast<std::int32_t>(std::upper_bound(cdf.begin(), cdf.end(), pick) - cdf.begin());
    f = std::min(f, last_positive);
    const double s = std::sqrt(rng.uniform(ctr, 1));
    const double r2 = rng.uniform(ctr, 2);
    const Vec3 bary(1.0 - s, s * (1.0 - r2), s * r2);
    out.face_indices[i] = f;
    out.barycentric[i] = bary;
    out.points[i] = bary[0] * mesh.corner(f, 0) + bary[1] * mesh.corner(f, 1) + bary[2] * mesh.corner(f, 2);
  }
  return out;
}

/// Recomputes the sample positions from (possibly moved) vertices with the face
/// choice and weights held fixed.
inline std::vector<Vec3> resample_fixed(std::span<const Vec3> vertices, std::span<const Face> faces,
                                        const SampledPoints& sampled) {
  std::vector<Vec3> out(sampled.size());
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    const Face& f = faces[sampled.face_indices[i]];
    const Vec3& w = sampled.barycentric[i];
    out[i] = w[0] * vertices[f[0]] + w[1] * vertices[f[1]] + w[2] * vertices[f[2]];
  }
  return out;
}

/// Vertex cotangents of the fixed-weight sampling map.
inline std::vector<Vec3> sample_points_vjp(const TriangleMesh& mesh, const SampledPoints& sampled,
                                           std::span<const Vec3> upstream) {
  if (upstream.size() != sampled.size()) throw DomainError("upstream size differs from sample count");
  std::vector<Vec3> grad(mesh.num_vertices(), Vec3::Zero());
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    const Face& f = mesh.faces[sampled.face_indices[i]];
    for (int k = 0; k < 3; ++k) grad[f[k]] += sampled.barycentric[i][k] * upstream[i];
  }
  return grad;
}

}  // namespace clay
