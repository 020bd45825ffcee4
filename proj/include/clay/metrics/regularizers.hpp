#pragma once

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "clay/accel/adjacency.hpp"
#include "clay/types.hpp"

namespace clay {

namespace detail {

using VertexMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

inline VertexMatrix as_matrix(std::span<const Vec3> v) {
  VertexMatrix m(static_cast<Eigen::Index>(v.size()), 3);
  for (std::size_t i = 0; i < v.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
  return m;
}

inline void require_no_isolated(const MeshAdjacency& adj) {
  for (std::size_t v = 0; v < adj.num_vertices; ++v) {
    if (adj.neighbors(v).empty()) throw DomainError("vertex " + std::to_string(v) + " has no neighbors");
  }
}

}  // namespace detail

/// (1/N) sum_v |v - mean(neighbors(v))|^2 through the uniform Laplacian.
inline double laplacian_loss(std::span<const Vec3> vertices, const MeshAdjacency& adj) {
  detail::require_no_isolated(adj);
  if (vertices.size() != adj.num_vertices) throw DomainError("vertex count differs from adjacency");
  const detail::VertexMatrix lv = adj.uniform_laplacian * detail::as_matrix(vertices);
  return lv.squaredNorm() / static_cast<double>(vertices.size());
}

inline std::vector<Vec3> laplacian_loss_vjp(std::span<const Vec3> vertices, const MeshAdjacency& adj,
                                            double upstream = 1.0) {
  detail::require_no_isolated(adj);
  const detail::VertexMatrix lv = adj.uniform_laplacian * detail::as_matrix(vertices);
  const detail::VertexMatrix g =
      (2.0 * upstream / static_cast<double>(vertices.size())) * (adj.uniform_laplacian.transpose() * lv);
  std::vector<Vec3> out(vertices.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.row(static_cast<Eigen::Index>(i)).transpose();
  return out;
}

/// Mean squared length over unique edges.
inline double edge_length_loss(std::span<const Vec3> vertices, const MeshAdjacency& adj) {
  if (adj.edges.empty()) throw DomainError("edge_length_loss needs at least one edge");
  double sum = 0.0;
  for (const auto& e : adj.edges) sum += (vertices[e[0]] - vertices[e[1]]).squaredNorm();
  return sum / static_cast<double>(adj.edges.size());
}

inline std::vector<Vec3> edge_length_loss_vjp(std::span<const Vec3> vertices, const MeshAdjacency& adj,
                                              double upstream = 1.0) {
  if (adj.edges.empty()) throw DomainError("edge_length_loss needs at least one edge");
  std::vector<Vec3> g(vertices.size(), Vec3::Zero());
  const double w = 2.0 * upstream / static_cast<double>(adj.edges.size());
  for (const auto& e : adj.edges) {
    const Vec3 d = w * (vertices[e[0]] - vertices[e[1]]);
    g[e[0]] += d;
    g[e[1]] -= d;
  }
  return g;
}

namespace detail {

inline Vec3 raw_normal(std::span<const Vec3> v, const Face& f) {
  return (v[f[1]] - v[f[0]]).cross(v[f[2]] - v[f[0]]);
}

inline void require_interior(const MeshAdjacency& adj) {
  for (const auto& ef : adj.edge_faces) {
    if (ef[1] >= 0) return;
  }
  throw DomainError("smoothness_loss needs at least one interior edge");
}

// Adds the cotangent of a face's raw normal (the cross product) to its corners.
inline void cross_backward(std::span<const Vec3> v, const Face& f, const Vec3& g, std::vector<Vec3>& out) {
  const Vec3 e1 = v[f[1]] - v[f[0]], e2 = v[f[2]] - v[f[0]];
  const Vec3 g1 = e2.cross(g), g2 = g.cross(e1);
  out[f[1]] += g1;
  out[f[2]] += g2;
  out[f[0]] -= g1 + g2;
}

}  // namespace detail

/// Mean over interior edges of 1 - cos(angle between the two face normals).
inline double smoothness_loss(std::span<const Vec3> vertices, std::span<const Face> faces, const MeshAdjacency& adj) {
  detail::require_interior(adj);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& ef : adj.edge_faces) {
    if (ef[1] < 0) continue;
    const Vec3 c1 = detail::raw_normal(vertices, faces[ef[0]]), c2 = detail::raw_normal(vertices, faces[ef[1]]);
    const double l1 = c1.norm(), l2 = c2.norm();
    if (!(l1 > 0.0) || !(l2 > 0.0)) throw DomainError("smoothness_loss on a degenerate face");
    sum += 1.0 - c1.dot(c2) / (l1 * l2);
    ++count;
  }
  return sum / static_cast<double>(count);
}

inline std::vector<Vec3> smoothness_loss_vjp(std::span<const Vec3> vertices, std::span<const Face> faces,
                                             const MeshAdjacency& adj, double upstream = 1.0) {
  detail::require_interior(adj);
  std::size_t count = 0;
  for (const auto& ef : adj.edge_faces) count += ef[1] >= 0;
  const double w = -upstream / static_cast<double>(count);
  std::vector<Vec3> g(vertices.size(), Vec3::Zero());
  for (const auto& ef : adj.edge_faces) {
    if (ef[1] < 0) continue;
    const Vec3 c1 = detail::raw_normal(vertices, faces[ef[0]]), c2 = detail::raw_normal(vertices, faces[ef[1]]);
    const double l1 = c1.norm(), l2 = c2.norm();
    if (!(l1 > 0.0) || !(l2 > 0.0)) throw DomainError("smoothness_loss on a degenerate face");
    const Vec3 n1 = c1 / l1, n2 = c2 / l2;
    // d(n1.n2)/dc1 = (I - n1 n1^T) n2 / |c1|
    const Vec3 g1 = w * (n2 - n1 * n1.dot(n2)) / l1;
    const Vec3 g2 = w * (n1 - n2 * n2.dot(n1)) / l2;
    detail::cross_backward(vertices, faces[ef[0]], g1, g);
    detail::cross_backward(vertices, faces[ef[1]], g2, g);
  }
  return g;
}

inline double smoothness_loss(const TriangleMesh& mesh, const MeshAdjacency& adj) {
  return smoothness_loss(mesh.vertices, mesh.faces, adj);
}
inline double laplacian_loss(const TriangleMesh& mesh, const MeshAdjacency& adj) {
  return laplacian_loss(mesh.vertices, adj);
}
inline double edge_length_loss(const TriangleMesh& mesh, const MeshAdjacency& adj) {
  return edge_length_loss(mesh.vertices, adj);
}

}  // namespace clay
