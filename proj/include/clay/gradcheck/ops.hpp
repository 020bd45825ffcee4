#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clay/accel/adjacency.hpp"
#include "clay/accel/bvh.hpp"
#include "clay/convert/sampling.hpp"
#include "clay/gradcheck/diff_op.hpp"
#include "clay/metrics/chamfer.hpp"
#include "clay/metrics/point_to_surface.hpp"
#include "clay/metrics/regularizers.hpp"
#include "clay/render/render.hpp"
#include "clay/transform.hpp"

namespace clay {

namespace detail {

inline std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) { return (h ^ v) * 1099511628211ULL; }

template <class Range>
std::uint64_t hash_indices(std::uint64_t h, const Range& r) {
  for (auto i : r) h = fnv_mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(i)));
  return h;
}

inline Vector scalar(double v) { return Vector::Constant(1, v); }

}  // namespace detail

/// x = stacked points, y = the rigidly moved points. Linear in x.
inline DiffOp transform_points_op(const RigidTransform& t, std::size_t n) {
  DiffOp op;
  op.name = "transform_points";
  op.input_dim = op.output_dim = static_cast<Eigen::Index>(3 * n);
  op.forward = [t](const Vector& x) { return ForwardResult{flatten(transform_points(t, unflatten(x))), {}}; };
  op.vjp = [t](const Vector&, const std::any&, const Vector& u) {
    std::vector<Vec3> g = unflatten(u);
    for (auto& v : g) v = t.rotation().transpose() * v;
    return flatten(g);
  };
  return op;
}

/// x = mesh vertices, y = surface samples with face choices and barycentric
/// weights frozen from `sampled`.
inline DiffOp sample_points_op(std::vector<Face> faces, std::size_t num_vertices, SampledPoints sampled) {
  DiffOp op;
  op.name = "sample_points";
  op.input_dim = static_cast<Eigen::Index>(3 * num_vertices);
  op.output_dim = static_cast<Eigen::Index>(3 * sampled.size());
  auto shared = std::make_shared<const std::pair<std::vector<Face>, SampledPoints>>(std::move(faces), std::move(sampled));
  op.forward = [shared](const Vector& x) {
    return ForwardResult{flatten(resample_fixed(unflatten(x), shared->first, shared->second)), {}};
  };
  op.vjp = [shared, num_vertices](const Vector&, const std::any&, const Vector& u) {
    TriangleMesh topo;
    topo.vertices.resize(num_vertices);
    topo.faces = shared->first;
    return flatten(sample_points_vjp(topo, shared->second, unflatten(u)));
  };
  return op;
}

/// x = [a; b] stacked, y = chamfer_distance(a, b).
inline DiffOp chamfer_op(std::size_t na, std::size_t nb) {
  DiffOp op;
  op.name = "chamfer";
  op.input_dim = static_cast<Eigen::Index>(3 * (na + nb));
  op.output_dim = 1;
  auto split = [na, nb](const Vector& x) {
    return std::pair{unflatten(x, 0, na), unflatten(x, static_cast<Eigen::Index>(3 * na), nb)};
  };
  op.forward = [split](const Vector& x) {
    auto [a, b] = split(x);
    ChamferResult r = chamfer_distance(std::span<const Vec3>(a), std::span<const Vec3>(b));
    const double v = r.value;
    return ForwardResult{detail::scalar(v), std::move(r)};
  };
  op.vjp = [split](const Vector& x, const std::any& ctx, const Vector& u) {
    auto [a, b] = split(x);
    const auto g = chamfer_vjp(a, b, std::any_cast<const ChamferResult&>(ctx), u[0]);
    Vector out(x.size());
    out << flatten(g.grad_a), flatten(g.grad_b);
    return out;
  };
  op.signature = [split](const Vector& x) {
    auto [a, b] = split(x);
    const ChamferResult r = chamfer_distance(std::span<const Vec3>(a), std::span<const Vec3>(b));
    return detail::hash_indices(detail::hash_indices(1469598103934665603ULL, r.a_to_b), r.b_to_a);
  };
  return op;
}

/// x = query points, y = mean squared distance to a fixed mesh.
inline DiffOp point_to_surface_op(const TriangleMesh& mesh, std::size_t n) {
  DiffOp op;
  op.name = "point_to_surface";
  op.input_dim = static_cast<Eigen::Index>(3 * n);
  op.output_dim = 1;
  auto bvh = std::make_shared<const TriangleBvh>(mesh);
  op.forward = [bvh](const Vector& x) {
    PointToSurfaceResult r = point_to_surface(unflatten(x), *bvh);
    const double v = r.value;
    return ForwardResult{detail::scalar(v), std::move(r)};
  };
  op.vjp = [](const Vector& x, const std::any& ctx, const Vector& u) {
    return flatten(point_to_surface_vjp(unflatten(x), std::any_cast<const PointToSurfaceResult&>(ctx), u[0]));
  };
  // Distance is smooth while the closest feature (vertex, edge or face
  // interior) stays the same; faces tied at a shared feature are not a choice.
  op.signature = [bvh, faces = mesh.faces](const Vector& x) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& p : unflatten(x)) {
      const ClosestPointResult c = bvh->closest_point(p);
      const Face& f = faces[c.face];
      const auto r = static_cast<int>(c.region);
      std::uint64_t key = 0;
      if (r <= 2) {
        key = static_cast<std::uint64_t>(f[r]);
      } else if (r <= 5) {
        auto a = static_cast<std::uint64_t>(f[r - 3]), b = static_cast<std::uint64_t>(f[(r - 2) % 3]);
        if (a > b) std::swap(a, b);
        key = (1ULL << 62) | (a << 31) | b;
      } else {
        key = (2ULL << 62) | static_cast<std::uint64_t>(c.face);
      }
      h = detail::fnv_mix(h, key);
    }
    return h;
  };
  return op;
}

enum class Regularizer { Laplacian, EdgeLength, Smoothness };

/// x = mesh vertices, y = the chosen regularizer over the fixed topology.
inline DiffOp regularizer_op(Regularizer kind, const TriangleMesh& mesh) {
  DiffOp op;
  op.name = kind == Regularizer::Laplacian ? "laplacian" : kind == Regularizer::EdgeLength ? "edge_length" : "smoothness";
  op.input_dim = static_cast<Eigen::Index>(3 * mesh.num_vertices());
  op.output_dim = 1;
  auto adj = std::make_shared<const MeshAdjacency>(build_adjacency(mesh));
  auto faces = std::make_shared<const std::vector<Face>>(mesh.faces);
  op.forward = [kind, adj, faces](const Vector& x) {
    const auto v = unflatten(x);
    double value = 0.0;
    switch (kind) {
      case Regularizer::Laplacian: value = laplacian_loss(v, *adj); break;
      case Regularizer::EdgeLength: value = edge_length_loss(v, *adj); break;
      case Regularizer::Smoothness: value = smoothness_loss(v, *faces, *adj); break;
    }
    return ForwardResult{detail::scalar(value), {}};
  };
  op.vjp = [kind, adj, faces](const Vector& x, const std::any&, const Vector& u) {
    const auto v = unflatten(x);
    switch (kind) {
      case Regularizer::Laplacian: return flatten(laplacian_loss_vjp(v, *adj, u[0]));
      case Regularizer::EdgeLength: return flatten(edge_length_loss_vjp(v, *adj, u[0]));
      case Regularizer::Smoothness: break;
    }
    return flatten(smoothness_loss_vjp(v, *faces, *adj, u[0]));
  };
  return op;
}

/// x = [vertex positions; vertex colors], y = [color image; alpha image] of a
/// fixed pipeline and topology. Soft and Dib only.
inline DiffOp render_op(const RenderPipeline& pipe, const TriangleMesh& mesh, const Material& mat = {}) {
  check_render_vjp_supported(pipe, mesh);
  const std::size_t n = mesh.num_vertices();
  const int w = pipe.width(), h = pipe.height();
  DiffOp op;
  op.name = pipe.rasterizer == RasterizerKind::Dib ? "rasterize_dib" : "rasterize_soft";
  op.input_dim = static_cast<Eigen::Index>(6 * n);
  op.output_dim = static_cast<Eigen::Index>(w) * h * 4;
  auto topo = std::make_shared<const TriangleMesh>(mesh);
  auto build = [topo, n](const Vector& x) {
    TriangleMesh m = *topo;
    m.vertices = unflatten(x, 0, n);
    m.vertex_colors = unflatten(x, static_cast<Eigen::Index>(3 * n), n);
    return m;
  };
  op.forward = [pipe, mat, build](const Vector& x) {
    const RenderOutput out = render(pipe, build(x), mat);
    Vector y(static_cast<Eigen::Index>(out.color.data.size() + out.alpha.data.size()));
    y << Eigen::Map<const Vector>(out.color.data.data(), static_cast<Eigen::Index>(out.color.data.size())),
        Eigen::Map<const Vector>(out.alpha.data.data(), static_cast<Eigen::Index>(out.alpha.data.size()));
    return ForwardResult{std::move(y), {}};
  };
  op.vjp = [pipe, mat, build, w, h](const Vector& x, const std::any&, const Vector& u) {
    RenderUpstream up{Image(w, h, 3), Image(w, h, 1)};
    const auto nc = static_cast<Eigen::Index>(up.color.data.size());
    Eigen::Map<Vector>(up.color.data.data(), nc) = u.head(nc);
    Eigen::Map<Vector>(up.alpha.data.data(), static_cast<Eigen::Index>(up.alpha.data.size())) = u.tail(u.size() - nc);
    const RenderGradient g = render_vjp(pipe, build(x), mat, up);
    Vector out(x.size());
    out << flatten(g.vertices), flatten(g.colors);
    return out;
  };
  op.signature = [pipe, build](const Vector& x) { return render_signature(pipe, build(x)); };
  return op;
}

/// y = sum (x - target)^2.
inline DiffOp l2_loss_op(Vector target) {
  DiffOp op;
  op.name = "l2_loss";
  op.input_dim = target.size();
  op.output_dim = 1;
  auto t = std::make_shared<const Vector>(std::move(target));
  op.forward = [t](const Vector& x) { return ForwardResult{detail::scalar((x - *t).squaredNorm()), {}}; };
  op.vjp = [t](const Vector& x, const std::any&, const Vector& u) -> Vector { return 2.0 * u[0] * (x - *t); };
  return op;
}

}  // namespace clay
