#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "clay/accel/adjacency.hpp"
#include "clay/metrics.hpp"
#include "clay/rotation.hpp"
#include "clay/shapes.hpp"
#include "clay/convert/sampling.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace clay {
namespace {

double rel_err(double a, double f) { return std::abs(a - f) / std::max({std::abs(a), std::abs(f), 1e-8}); }

// ---- nearest neighbors / chamfer ----

TEST(Nearest, GridMatchesBruteForceIncludingFarQueries) {
  std::mt19937_64 rng(1);
  auto targets = testing::random_points(rng, 3000);
  for (int i = 0; i < 50; ++i) targets.push_back(targets[i]);  // exact duplicates exercise ties
  auto queries = testing::random_points(rng, 2000, -3.0, 3.0);
  queries.push_back(Vec3(100, -50, 20));
  const auto g = nearest_neighbors(queries, targets, NnMethod::GridHash);
  const auto bf = nearest_neighbors(queries, targets, NnMethod::BruteForce);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    EXPECT_EQ(g[i].index, bf[i].index);
    EXPECT_EQ(g[i].sq_distance, bf[i].sq_distance);
  }
}

TEST(Nearest, ClusteredAndFlatSets) {
  std::mt19937_64 rng(2);
  std::vector<Vec3> targets;
  for (int i = 0; i < 1500; ++i) {
    Vec3 p = 1e-3 * testing::random_vec(rng);
    p.z() = 0;
    targets.push_back(p + (i % 2 ? Vec3(5, 0, 0) : Vec3::Zero()));
  }
  const auto queries = testing::random_points(rng, 500, -1.0, 6.0);
  const auto g = nearest_neighbors(queries, targets, NnMethod::GridHash);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto bf = nearest_brute_force(queries[i], targets);
    EXPECT_EQ(g[i].index, bf.index);
  }
}

TEST(Chamfer, Identities) {
  std::mt19937_64 rng(3);
  const auto a = testing::random_points(rng, 200);
  const auto b = testing::random_points(rng, 150);
  EXPECT_EQ(chamfer_distance(a, a).value, 0.0);
  EXPECT_NEAR(chamfer_distance(a, b).value, chamfer_distance(b, a).value, 1e-12);
  const std::vector<Vec3> p{Vec3(0, 0, 0)}, q{Vec3(1, 0, 0)};
  EXPECT_DOUBLE_EQ(chamfer_distance(p, q).value, 2.0);
  EXPECT_THROW(chamfer_distance(std::span<const Vec3>(), a), DomainError);
}

TEST(Chamfer, ZeroOnlyForEqualSets) {
  std::mt19937_64 rng(4);
  auto a = testing::random_points(rng, 100);
  auto b = a;
  std::reverse(b.begin(), b.end());
  b.push_back(a[3]);
  EXPECT_EQ(chamfer_distance(a, b).value, 0.0);
  b.back().x() += 1e-9;
  EXPECT_GT(chamfer_distance(a, b).value, 0.0);
}

TEST(Chamfer, AcceleratedEqualsBruteForce) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 3; ++t) {
    const auto a = testing::random_points(rng, 5000);
    const auto b = testing::random_points(rng, 5000, -1.2, 0.8);
    const auto fast = chamfer_distance(a, b, NnMethod::GridHash);
    const auto slow = chamfer_distance(a, b, NnMethod::BruteForce);
    EXPECT_NEAR(fast.value, slow.value, 1e-12);
    EXPECT_EQ(fast.a_to_b, slow.a_to_b);
    EXPECT_EQ(fast.b_to_a, slow.b_to_a);
  }
}

TEST(Chamfer, VjpMatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  const auto a = testing::random_points(rng, 40);
  const auto b = testing::random_points(rng, 30);
  const auto r = chamfer_distance(a, b);
  const auto g = chamfer_vjp(a, b, r);
  const double eps = 1e-6;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      auto ap = a, am = a;
      ap[i][k] += eps;
      am[i][k] -= eps;
      const auto rp = chamfer_distance(ap, b), rm = chamfer_distance(am, b);
      if (rp.a_to_b != r.a_to_b || rm.a_to_b != r.a_to_b || rp.b_to_a != r.b_to_a || rm.b_to_a != r.b_to_a) continue;
      EXPECT_LE(rel_err(g.grad_a[i][k], (rp.value - rm.value) / (2 * eps)), 1e-6);
    }
  }
}

// ---- EMD ----

TEST(Emd, TrivialCases) {
  std::mt19937_64 rng(7);
  const auto a = testing::random_points(rng, 20);
  const auto r = emd_approx(a, a, 1e-6);
  EXPECT_EQ(r.cost, 0.0);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(r.assignment[i], i);
  const std::vector<Vec3> p{Vec3(0, 0, 0), Vec3(1, 0, 0)}, q{Vec3(1, 0, 0), Vec3(0, 0, 0)};
  const auto s = emd_approx(p, q, 1e-6);
  EXPECT_EQ(s.cost, 0.0);
  EXPECT_EQ(s.assignment, (std::vector<std::int32_t>{1, 0}));
  EXPECT_THROW(emd_approx(std::span<const Vec3>(a).first(3), std::span<const Vec3>(a).first(4), 1e-3), DomainError);
}

TEST(Emd, WithinGapOfHungarian) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + static_cast<int>(rng() % 64);
    const auto a = testing::random_points(rng, n);
    const auto b = testing::random_points(rng, n);
    const double eps = 1e-4;
    const auto r = emd_approx(a, b, eps);
    std::vector<std::int32_t> sorted = r.assignment;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i) ASSERT_EQ(sorted[i], i);
    const double opt = testing::hungarian_optimum(a, b);
    EXPECT_GE(r.cost, opt - 1e-9);
    EXPECT_LE(r.cost, opt + r.gap_bound + 1e-9);
    EXPECT_DOUBLE_EQ(r.gap_bound, n * eps);
  }
}

TEST(Emd, Deterministic) {
  std::mt19937_64 rng(9);
  const auto a = testing::random_points(rng, 50), b = testing::random_points(rng, 50);
  EXPECT_EQ(emd_approx(a, b, 1e-3).assignment, emd_approx(a, b, 1e-3).assignment);
}

// ---- IoU ----

TEST(Iou, Cases) {
  VoxelGrid a({3, 1, 1}, Vec3::Zero(), 1.0), b({3, 1, 1}, Vec3::Zero(), 1.0);
  EXPECT_EQ(voxel_iou(a, b), 1.0);
  a.values = {1, 1, 0};
  b.values = {0, 1, 1};
  EXPECT_DOUBLE_EQ(voxel_iou(a, b), 1.0 / 3.0);
  EXPECT_EQ(voxel_iou(a, a), 1.0);
  b.values = {0, 0, 1};
  EXPECT_EQ(voxel_iou(a, b), 0.0);
  EXPECT_THROW(voxel_iou(a, VoxelGrid({2, 1, 1}, Vec3::Zero(), 1.0)), DomainError);
}

// ---- point to surface ----

TEST(PointToSurface, OnSurfaceAndPlane) {
  const auto mesh = shapes::icosphere(2);
  const auto s = sample_points_on_mesh(mesh, 2000, 1);
  EXPECT_LT(point_to_surface(s.points, mesh).value, 1e-12);
  TriangleMesh tri;
  tri.vertices = {{-100, -100, 0}, {100, -100, 0}, {0, 100, 0}};
  tri.faces = {{0, 1, 2}};
  const std::vector<Vec3> p{Vec3(0.3, 0.2, 0.7)};
  EXPECT_NEAR(point_to_surface(p, tri).value, 0.49, 1e-15);
}

TEST(PointToSurface, VjpMatchesFiniteDifferences) {
  std::mt19937_64 rng(10);
  const auto mesh = shapes::icosphere(1);
  const TriangleBvh bvh(mesh);
  const auto pts = testing::random_points(rng, 30, -1.5, 1.5);
  const auto r = point_to_surface(pts, bvh);
  const auto g = point_to_surface_vjp(pts, r);
  const double eps = 1e-6;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      auto pp = pts, pm = pts;
      pp[i][k] += eps;
      pm[i][k] -= eps;
      const auto rp = point_to_surface(pp, bvh), rm = point_to_surface(pm, bvh);
      if (rp.closest[i].face != r.closest[i].face || rm.closest[i].face != r.closest[i].face) continue;
      EXPECT_LE(rel_err(g[i][k], (rp.value - rm.value) / (2 * eps)), 1e-6);
    }
  }
}

// ---- regularizers ----

// Central differences are exact for the quadratic losses, so those use a large step.
template <class Loss, class Vjp>
void check_regularizer_fd(const TriangleMesh& mesh, Loss loss, Vjp vjp, double tol, double eps) {
  const auto g = vjp(mesh.vertices);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    for (int k = 0; k < 3; ++k) {
      auto p = mesh.vertices, m = mesh.vertices;
      p[v][k] += eps;
      m[v][k] -= eps;
      const double fd = (loss(p) - loss(m)) / (2 * eps);
      EXPECT_LE(rel_err(g[v][k], fd), tol) << v << "," << k << " a=" << g[v][k] << " f=" << fd;
    }
  }
}

TriangleMesh bumpy_sphere(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto mesh = shapes::icosphere(1);
  for (auto& v : mesh.vertices) v *= 1.0 + 0.2 * testing::random_vec(rng).x();
  return mesh;
}

TEST(Regularizers, LaplacianLoss) {
  const auto plane = shapes::grid_plane(4);
  const auto adj = build_adjacency(plane);
  const detail::VertexMatrix lv = adj.uniform_laplacian * detail::as_matrix(plane.vertices);
  for (int j = 1; j < 4; ++j)
    for (int i = 1; i < 4; ++i) EXPECT_LE(lv.row(j * 5 + i).norm(), 1e-12);

  const auto mesh = bumpy_sphere(1);
  const auto sadj = build_adjacency(mesh);
  check_regularizer_fd(
      mesh, [&](const std::vector<Vec3>& v) { return laplacian_loss(v, sadj); },
      [&](const std::vector<Vec3>& v) { return laplacian_loss_vjp(v, sadj); }, 1e-6, 1e-2);

  TriangleMesh iso = shapes::tetrahedron();
  iso.vertices.push_back(Vec3(5, 5, 5));
  EXPECT_THROW(laplacian_loss(iso.vertices, build_adjacency(iso)), DomainError);
}

TEST(Regularizers, EdgeLengthLoss) {
  const auto tet = shapes::tetrahedron();
  const auto adj = build_adjacency(tet);
  EXPECT_NEAR(edge_length_loss(tet, adj), 1.0, 1e-12);
  auto scaled = tet.vertices;
  for (auto& v : scaled) v *= 3.0;
  EXPECT_NEAR(edge_length_loss(scaled, adj), 9.0, 1e-12);
  const auto mesh = bumpy_sphere(2);
  const auto sadj = build_adjacency(mesh);
  check_regularizer_fd(
      mesh, [&](const std::vector<Vec3>& v) { return edge_length_loss(v, sadj); },
      [&](const std::vector<Vec3>& v) { return edge_length_loss_vjp(v, sadj); }, 1e-6, 1e-2);
}

TEST(Regularizers, SmoothnessLoss) {
  const auto quad = shapes::grid_plane(1);
  EXPECT_NEAR(smoothness_loss(quad, build_adjacency(quad)), 0.0, 1e-12);
  TriangleMesh fold;
  fold.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  fold.faces = {{0, 1, 2}, {0, 3, 1}};
  EXPECT_NEAR(smoothness_loss(fold, build_adjacency(fold)), 1.0, 1e-12);
  TriangleMesh single;
  single.vertices = fold.vertices;
  single.faces = {{0, 1, 2}};
  EXPECT_THROW(smoothness_loss(single, build_adjacency(single)), DomainError);

  const auto mesh = bumpy_sphere(3);
  const auto sadj = build_adjacency(mesh);
  check_regularizer_fd(
      mesh, [&](const std::vector<Vec3>& v) { return smoothness_loss(v, mesh.faces, sadj); },
      [&](const std::vector<Vec3>& v) { return smoothness_loss_vjp(v, mesh.faces, sadj); }, 1e-5, 1e-6);
}

TEST(Regularizers, RigidMotionInvariance) {
  std::mt19937_64 rng(11);
  const auto mesh = bumpy_sphere(4);
  const auto adj = build_adjacency(mesh);
  const Mat3 r = exp_so3(testing::random_vec(rng, -2, 2));
  const Vec3 t = testing::random_vec(rng, -5, 5);
  auto moved = mesh.vertices;
  for (auto& v : moved) v = r * v + t;
  EXPECT_NEAR(laplacian_loss(moved, adj), laplacian_loss(mesh, adj), 1e-10);
  EXPECT_NEAR(edge_length_loss(moved, adj), edge_length_loss(mesh, adj), 1e-10);
  EXPECT_NEAR(smoothness_loss(moved, mesh.faces, adj), smoothness_loss(mesh, adj), 1e-10);
}

}  // namespace
}  // namespace clay
