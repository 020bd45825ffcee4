#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "clay/accel/primitives.hpp"
#include "clay/random.hpp"
#include "clay/types.hpp"

namespace clay {

struct BvhNode {
  Aabb box;
  std::int32_t left = -1;   // internal: child indices
  std::int32_t right = -1;
  std::int32_t first = 0;   // leaf: range into triangle_order
  std::int32_t count = 0;

  bool is_leaf() const { return count > 0; }
};

struct ClosestPointResult {
  double distance = std::numeric_limits<double>::infinity();
  double sq_distance = std::numeric_limits<double>::infinity();
  std::int32_t face = -1;
  Vec3 point = Vec3::Zero();
  Vec3 barycentric = Vec3::Zero();
  TriangleRegion region = TriangleRegion::Interior;
};

struct RayHit {
  double t = 0.0;
  std::int32_t face = -1;
  bool grazing = false;

  friend bool operator<(const RayHit& a, const RayHit& b) {
    return a.t < b.t || (a.t == b.t && a.face < b.face);
  }
};

namespace detail {

inline void consider_face(const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c, std::int32_t face,
                          ClosestPointResult& best) {
  const TrianglePoint tp = closest_point_on_triangle(q, a, b, c);
  if (tp.sq_distance < best.sq_distance || (tp.sq_distance == best.sq_distance && face < best.face)) {
    best.sq_distance = tp.sq_distance;
    best.face = face;
    best.point = tp.point;
    best.barycentric = tp.barycentric;
    best.region = tp.region;
  }
}

}  // namespace detail

/// Median-split bounding volume hierarchy over the faces of a triangle mesh.
/// Keeps its own copy of the triangle coordinates, so the mesh may go away.
class TriangleBvh {
 public:
  static constexpr int kLeafSize = 4;

  explicit TriangleBvh(const TriangleMesh& mesh) {
    if (mesh.faces.empty()) throw DomainError("cannot build a BVH over a mesh with no faces");
    mesh.validate();
    const auto m = mesh.faces.size();
    order_.resize(m);
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<Aabb> boxes(m);
    std::vector<Vec3> centroids(m);
    for (std::size_t f = 0; f < m; ++f) {
      for (int k = 0; k < 3; ++k) boxes[f].expand(mesh.corner(f, k));
      centroids[f] = (mesh.corner(f, 0) + mesh.corner(f, 1) + mesh.corner(f, 2)) / 3.0;
    }
    nodes_.reserve(2 * m / kLeafSize + 2);
    build(0, static_cast<std::int32_t>(m), boxes, centroids, 1);

    tris_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto f = order_[i];
      tris_[i] = {mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2)};
    }
  }

  const std::vector<BvhNode>& nodes() const { return nodes_; }
  const std::vector<std::int32_t>& triangle_order() const { return order_; }
  const Aabb& bounds() const { return nodes_.front().box; }
  int depth() const { return depth_; }
  std::size_t num_faces() const { return order_.size(); }

  /// Exact closest point over all faces; ties resolve to the lowest face index.
  ClosestPointResult closest_point(const Vec3& q) const {
    ClosestPointResult best;
    struct Entry {
      std::int32_t node;
      double d2;
    };
    std::array<Entry, 2 * 64 + 4> stack;
    int top = 0;
    stack[top++] = {0, nodes_[0].box.squared_distance(q)};
    while (top > 0) {
      const Entry e = stack[--top];
      if (e.d2 > best.sq_distance) continue;
      const BvhNode& n = nodes_[e.node];
      if (n.is_leaf()) {
        for (std::int32_t i = n.first; i < n.first + n.count; ++i) {
          detail::consider_face(q, tris_[i][0], tris_[i][1], tris_[i][2], order_[i], best);
        }
        continue;
      }
      const double dl = nodes_[n.left].box.squared_distance(q);
      const double dr = nodes_[n.right].box.squared_distance(q);
      // Push the farther child first so the nearer one is expanded next.
      if (dl <= dr) {
        stack[top++] = {n.right, dr};
        stack[top++] = {n.left, dl};
      } else {
        stack[top++] = {n.left, dl};
        stack[top++] = {n.right, dr};
      }
    }
    best.distance = std::sqrt(best.sq_distance);
    return best;
  }

  /// Every hit with t > 1e-12 along origin + t * dir, sorted by t.
  std::vector<RayHit> ray_intersections(const Vec3& origin, const Vec3& dir) const {
    if (!(dir.squaredNorm() > 0.0)) throw DomainError("ray direction must be non-zero");
    std::vector<RayHit> hits;
    std::array<std::int32_t, 2 * 64 + 4> stack;
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const BvhNode& n = nodes_[stack[--top]];
      if (!ray_hits_box(origin, dir, padded(n.box), std::numeric_limits<double>::infinity())) continue;
      if (n.is_leaf()) {
        for (std::int32_t i = n.first; i < n.first + n.count; ++i) {
          if (auto h = intersect_ray_triangle(origin, dir, tris_[i][0], tris_[i][1], tris_[i][2])) {
            hits.push_back({h->t, order_[i], h->grazing});
          }
        }
        continue;
      }
      stack[top++] = n.right;
      stack[top++] = n.left;
    }
    std::sort(hits.begin(), hits.end());
    return hits;
  }

  /// Visits every leaf triangle once; used to audit the tree.
  template <class Fn>
  void for_each_leaf_face(Fn&& fn) const {
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
      const BvhNode& n = nodes_[stack.back()];
      stack.pop_back();
      if (n.is_leaf()) {
        for (std::int32_t i = n.first; i < n.first + n.count; ++i) fn(order_[i]);
      } else {
        stack.push_back(n.left);
        stack.push_back(n.right);
      }
    }
  }

 private:
  static Aabb padded(const Aabb& b) {
    const double pad = 1e-9 * std::max(1.0, b.extent().maxCoeff());
    Aabb out = b;
    out.lo.array() -= pad;
    out.hi.array() += pad;
    return out;
  }

  std::int32_t build(std::int32_t first, std::int32_t last, const std::vector<Aabb>& boxes,
                     const std::vector<Vec3>& centroids, int level) {
    depth_ = std::max(depth_, level);
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    Aabb box;
    for (std::int32_t i = first; i < last; ++i) box.expand(boxes[order_[i]]);
    nodes_[id].box = box;
    const std::int32_t count = last - first;
    if (count <= kLeafSize) {
      nodes_[id].first = first;
      nodes_[id].count = count;
      return id;
    }
    const int axis = box.longest_axis();
    const std::int32_t mid = first + count / 2;
    std::nth_element(order_.begin() + first, order_.begin() + mid, order_.begin() + last,
                     [&](std::int32_t a, std::int32_t b) {
                       const double ca = centroids[a][axis], cb = centroids[b][axis];
                       return ca < cb || (ca == cb && a < b);
                     });
    const auto left = build(first, mid, boxes, centroids, level + 1);
    const auto right = build(mid, last, boxes, centroids, level + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::vector<BvhNode> nodes_;
  std::vector<std::int32_t> order_;
  std::vector<std::array<Vec3, 3>> tris_;
  int depth_ = 0;
};

inline TriangleBvh build_bvh(const TriangleMesh& mesh) { return TriangleBvh(mesh); }

inline ClosestPointResult closest_point_on_mesh(const TriangleBvh& bvh, const Vec3& q) {
  return bvh.closest_point(q);
}

inline std::vector<RayHit> ray_intersections(const TriangleBvh& bvh, const Vec3& origin, const Vec3& dir) {
  return bvh.ray_intersections(origin, dir);
}

// Reference paths: same per-triangle kernels, no hierarchy.

inline ClosestPointResult closest_point_brute_force(const TriangleMesh& mesh, const Vec3& q) {
  ClosestPointResult best;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    detail::consider_face(q, mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2),
                          static_cast<std::int32_t>(f), best);
  }
  best.distance = std::sqrt(best.sq_distance);
  return best;
}

inline std::vector<RayHit> ray_intersections_brute_force(const TriangleMesh& mesh, const Vec3& origin,
                                                         const Vec3& dir) {
  if (!(dir.squaredNorm() > 0.0)) throw DomainError("ray direction must be non-zero");
  std::vector<RayHit> hits;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (auto h = intersect_ray_triangle(origin, dir, mesh.corner(f, 0), mesh.corner(f, 1), mesh.corner(f, 2))) {
      hits.push_back({h->t, static_cast<std::int32_t>(f), h->grazing});
    }
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

/// Maximum number of perturbed re-casts after a grazing hit.
inline constexpr int kMaxGrazingRetries = 8;

struct SignTest {
  bool inside = false;
  int retries = 0;
  bool resolved = true;  // false when every retry still grazed
};

inline bool any_grazing(const std::vector<RayHit>& hits) {
  return std::any_of(hits.begin(), hits.end(), [](const RayHit& h) { return h.grazing; });
}

/// Direction of the k-th parity ray: a fixed generic direction first, then
/// deterministic pseudo-random unit vectors.
inline Vec3 parity_ray_direction(int attempt) {
  if (attempt == 0) return Vec3(0.5773502691896258, 0.4236067977499790, 0.6980762113533160).normalized();
  const CounterRng rng(0x5157a7e5ULL);
  const double z = 2.0 * rng.uniform(attempt, 0) - 1.0;
  const double phi = 2.0 * 3.14159265358979323846 * rng.uniform(attempt, 1);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Inside/outside by ray parity. `cast(origin, dir)` returns the sorted hits.
template <class Caster>
SignTest parity_sign_test(const Vec3& p, Caster&& cast) {
  SignTest out;
  for (int attempt = 0; attempt <= kMaxGrazingRetries; ++attempt) {
    const auto hits = cast(p, parity_ray_direction(attempt));
    out.inside = (hits.size() % 2) == 1;
    out.retries = attempt;
    if (!any_grazing(hits)) return out;
  }
  out.resolved = false;
  return out;
}

/// Requires a watertight mesh for a meaningful answer.
inline SignTest point_inside(const TriangleBvh& bvh, const Vec3& p) {
  return parity_sign_test(p, [&](const Vec3& o, const Vec3& d) { return bvh.ray_intersections(o, d); });
}

inline SignTest point_inside_brute_force(const TriangleMesh& mesh, const Vec3& p) {
  return parity_sign_test(p, [&](const Vec3& o, const Vec3& d) {
    return ray_intersections_brute_force(mesh, o, d);
  });
}

}  // namespace clay
