#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "clay/types.hpp"

namespace clay {

using Edge = std::array<std::int32_t, 2>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Edge/face/vertex connectivity of a triangle mesh plus its uniform Laplacian.
struct MeshAdjacency {
  std::size_t num_vertices = 0;
  /// Unique edges, lower vertex index first, in order of first appearance.
  std::vector<Edge> edges;
  /// One or two incident faces per edge; the second is -1 on boundary edges.
  std::vector<std::array<std::int32_t, 2>> edge_faces;
  /// face_edges[f][k] is the edge joining corners k and k+1 of face f.
  std::vector<std::array<std::int32_t, 3>> face_edges;
  /// face_adjacency[f][k] is the face across face_edges[f][k], or -1.
  std::vector<std::array<std::int32_t, 3>> face_adjacency;
  /// CSR vertex neighbor lists, each sorted ascending.
  std::vector<std::int32_t> neighbor_offsets;
  std::vector<std::int32_t> neighbor_indices;
  /// Row v: 1 on the diagonal and -1/|N(v)| on each neighbor. Isolated vertices have an empty row.
  SparseMatrix uniform_laplacian;

  std::span<const std::int32_t> neighbors(std::size_t v) const {
    return {neighbor_indices.data() + neighbor_offsets[v],
            static_cast<std::size_t>(neighbor_offsets[v + 1] - neighbor_offsets[v])};
  }

  int incident_face_count(std::size_t e) const { return edge_faces[e][1] < 0 ? 1 : 2; }

  std::size_t boundary_edge_count() const {
    return static_cast<std::size_t>(std::count_if(edge_faces.begin(), edge_faces.end(),
                                                  [](const auto& ef) { return ef[1] < 0; }));
  }
};

/// Single pass over the faces with edges bucketed by lower endpoint. Throws NonManifoldError when an edge
/// gathers a third face. Repeated corners inside one face contribute no edge.
inline MeshAdjacency build_adjacency(const TriangleMesh& mesh) {
  mesh.validate();
  const std::size_t n = mesh.num_vertices();
  const std::size_t m = mesh.num_faces();
  MeshAdjacency adj;
  adj.num_vertices = n;
  adj.edges.reserve(m * 3 / 2 + 3);
  adj.edge_faces.reserve(m * 3 / 2 + 3);
  adj.face_edges.assign(m, {-1, -1, -1});
  adj.face_adjacency.assign(m, {-1, -1, -1});

  // Edges bucketed by their lower endpoint; a bucket holds at most that vertex's valence.
  std::vector<std::uint32_t> bucket_start(n + 1, 0), bucket_fill;
  for (const auto& tri : mesh.faces) {
    for (int k = 0; k < 3; ++k) {
      const std::int32_t a = tri[k], b = tri[(k + 1) % 3];
      if (a != b) ++bucket_start[std::min(a, b) + 1];
    }
  }
  for (std::size_t v = 0; v < n; ++v) bucket_start[v + 1] += bucket_start[v];
  bucket_fill.assign(bucket_start.begin(), bucket_start.end() - 1);
  std::vector<std::int32_t> bucket_edge(bucket_start[n]);

  for (std::size_t f = 0; f < m; ++f) {
    const auto& tri = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      std::int32_t a = tri[k], b = tri[(k + 1) % 3];
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      std::int32_t e = -1;
      for (std::uint32_t i = bucket_start[a]; i < bucket_fill[a]; ++i) {
        if (adj.edges[bucket_edge[i]][1] == b) {
          e = bucket_edge[i];
          break;
        }
      }
      if (e < 0) {
        e = static_cast<std::int32_t>(adj.edges.size());
        bucket_edge[bucket_fill[a]++] = e;
        adj.edges.push_back({a, b});
        adj.edge_faces.push_back({static_cast<std::int32_t>(f), -1});
      } else if (adj.edge_faces[e][1] < 0 && adj.edge_faces[e][0] != static_cast<std::int32_t>(f)) {
        adj.edge_faces[e][1] = static_cast<std::int32_t>(f);
      } else {
        throw NonManifoldError(a, b, 3);
      }
      adj.face_edges[f][k] = e;
    }
  }

  for (std::size_t f = 0; f < m; ++f) {
    for (int k = 0; k < 3; ++k) {
      const auto e = adj.face_edges[f][k];
      if (e < 0) continue;
      const auto& ef = adj.edge_faces[e];
      adj.face_adjacency[f][k] = ef[0] == static_cast<std::int32_t>(f) ? ef[1] : ef[0];
    }
  }

  // Counting sort of edge endpoints into CSR neighbor lists.
  adj.neighbor_offsets.assign(n + 1, 0);
  for (const auto& e : adj.edges) {
    ++adj.neighbor_offsets[e[0] + 1];
    ++adj.neighbor_offsets[e[1] + 1];
  }
  for (std::size_t v = 0; v < n; ++v) adj.neighbor_offsets[v + 1] += adj.neighbor_offsets[v];
  adj.neighbor_indices.resize(adj.neighbor_offsets[n]);
  {
    std::vector<std::int32_t> cursor(adj.neighbor_offsets.begin(), adj.neighbor_offsets.end() - 1);
    for (const auto& e : adj.edges) {
      adj.neighbor_indices[cursor[e[0]]++] = e[1];
      adj.neighbor_indices[cursor[e[1]]++] = e[0];
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adj.neighbor_indices.begin() + adj.neighbor_offsets[v],
              adj.neighbor_indices.begin() + adj.neighbor_offsets[v + 1]);
  }

  // Assemble the Laplacian directly in compressed row form.
  SparseMatrix& lap = adj.uniform_laplacian;
  lap.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::VectorXi row_nnz(static_cast<Eigen::Index>(n));
  for (std::size_t v = 0; v < n; ++v) {
    const int deg = adj.neighbor_offsets[v + 1] - adj.neighbor_offsets[v];
    row_nnz[static_cast<Eigen::Index>(v)] = deg > 0 ? deg + 1 : 0;
  }
  lap.reserve(row_nnz);
  for (std::size_t v = 0; v < n; ++v) {
    const auto nb = adj.neighbors(v);
    if (nb.empty()) continue;
    const double w = -1.0 / static_cast<double>(nb.size());
    const auto row = static_cast<Eigen::Index>(v);
    bool diagonal_done = false;
    for (auto u : nb) {
      if (!diagonal_done && u > static_cast<std::int32_t>(v)) {
        lap.insert(row, row) = 1.0;
        diagonal_done = true;
      }
      lap.insert(row, u) = w;
    }
    if (!diagonal_done) lap.insert(row, row) = 1.0;
  }
  lap.makeCompressed();
  return adj;
}

/// True iff every edge has exactly two incident faces (and there is at least one edge).
inline bool is_watertight(const MeshAdjacency& adj) {
  return !adj.edges.empty() && adj.boundary_edge_count() == 0;
}

}  // namespace clay
