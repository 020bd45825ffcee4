#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "clay/accel/adjacency.hpp"
#include "clay/accel/bvh.hpp"
#include "clay/rotation.hpp"
#include "clay/shapes.hpp"
#include "test_util.hpp"

using namespace clay;
using clay::testing::random_points;
using clay::testing::random_unit;
using clay::testing::random_vec;

namespace {

TriangleMesh single_triangle() {
  TriangleMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
  m.faces = {{0, 1, 2}};
  return m;
}

// Icosphere with jittered radii so faces are not all alike.
TriangleMesh bumpy_sphere(int level, std::uint64_t seed) {
  TriangleMesh m = shapes::icosphere(level);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r(0.9, 1.1);
  for (auto& v : m.vertices) v *= r(rng);
  m.vertex_normals.clear();
  return m;
}

}  // namespace

TEST(Bvh, EmptyMeshIsDomainError) { EXPECT_THROW(build_bvh(TriangleMesh{}), DomainError); }

TEST(Bvh, SingleTriangleIsOneLeaf) {
  const TriangleBvh bvh = build_bvh(single_triangle());
  ASSERT_EQ(bvh.nodes().size(), 1u);
  EXPECT_TRUE(bvh.nodes()[0].is_leaf());
  EXPECT_EQ(bvh.nodes()[0].box.lo, Vec3(0, 0, 0));
  EXPECT_EQ(bvh.nodes()[0].box.hi, Vec3(1, 1, 0));
}

TEST(Bvh, TraversalCensusAndNesting) {
  const TriangleMesh mesh = shapes::grid_plane(71);  // 10082 faces
  const TriangleBvh bvh = build_bvh(mesh);
  std::vector<int> seen(mesh.num_faces(), 0);
  bvh.for_each_leaf_face([&](std::int32_t f) { ++seen[f]; });
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  for (const auto& n : bvh.nodes()) {
    if (n.is_leaf()) {
      EXPECT_LE(n.count, TriangleBvh::kLeafSize);
      continue;
    }
    EXPECT_TRUE(n.box.contains(bvh.nodes()[n.left].box));
    EXPECT_TRUE(n.box.contains(bvh.nodes()[n.right].box));
  }
  EXPECT_LE(bvh.depth(), 64);
}

TEST(ClosestPoint, QueryOnVertex) {
  const TriangleMesh mesh = shapes::icosphere(2);
  const TriangleBvh bvh = build_bvh(mesh);
  const auto r = closest_point_on_mesh(bvh, mesh.vertices[17]);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.point, mesh.vertices[17]);
}

TEST(ClosestPoint, OutsideUnitIcosphere) {
  const TriangleMesh mesh = shapes::icosphere(3);
  const TriangleBvh bvh = build_bvh(mesh);
  const auto r = closest_point_on_mesh(bvh, Vec3(2, 0, 0));
  EXPECT_NEAR(r.distance, 1.0, 5e-3);
  const auto brute = closest_point_brute_force(mesh, Vec3(2, 0, 0));
  EXPECT_EQ(r.sq_distance, brute.sq_distance);
  EXPECT_EQ(r.face, brute.face);
}

TEST(ClosestPoint, MatchesBruteForceOnRandomQueries) {
  std::mt19937_64 rng(99);
  const TriangleMesh mesh = bumpy_sphere(3, 5);
  const TriangleBvh bvh = build_bvh(mesh);
  for (const auto& q : random_points(rng, 1000, -2.0, 2.0)) {
    const auto a = closest_point_on_mesh(bvh, q);
    const auto b = closest_point_brute_force(mesh, q);
    ASSERT_NEAR(a.distance, b.distance, 1e-12);
    EXPECT_EQ(a.face, b.face);
    EXPECT_EQ(a.point, b.point);
  }
}

TEST(ClosestPoint, TriangleRegions) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  EXPECT_EQ(closest_point_on_triangle(Vec3(-1, -1, 0), a, b, c).region, TriangleRegion::Vertex0);
  EXPECT_EQ(closest_point_on_triangle(Vec3(2, -0.5, 0), a, b, c).region, TriangleRegion::Vertex1);
  EXPECT_EQ(closest_point_on_triangle(Vec3(0.5, -1, 0), a, b, c).region, TriangleRegion::Edge01);
  EXPECT_EQ(closest_point_on_triangle(Vec3(1, 1, 0), a, b, c).region, TriangleRegion::Edge12);
  const auto in = closest_point_on_triangle(Vec3(0.2, 0.3, 0.7), a, b, c);
  EXPECT_EQ(in.region, TriangleRegion::Interior);
  EXPECT_NEAR(in.sq_distance, 0.49, 1e-15);
  EXPECT_NEAR(in.barycentric.sum(), 1.0, 1e-15);
}

TEST(Rays, ThroughClosedCubeHitsTwice) {
  const TriangleBvh bvh = build_bvh(shapes::box());
  const Vec3 dir = Vec3(1, 0.31, 0.17).normalized();
  const auto hits = ray_intersections(bvh, Vec3(0.5, 0.5, 0.5) - 3 * dir, dir);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_LT(hits[0].t, hits[1].t);
  EXPECT_FALSE(hits[0].grazing);
}

TEST(Rays, MissingRootBoxIsEmpty) {
  const TriangleBvh bvh = build_bvh(shapes::box());
  EXPECT_TRUE(ray_intersections(bvh, Vec3(5, 5, 5), Vec3(1, 0, 0)).empty());
  EXPECT_THROW(ray_intersections(bvh, Vec3(0, 0, 0), Vec3::Zero()), DomainError);
}

TEST(Rays, EdgeHitIsFlaggedGrazing) {
  const TriangleBvh bvh = build_bvh(shapes::box());
  // Passes through the diagonal shared by the two z = 0 triangles.
  const auto hits = ray_intersections(bvh, Vec3(0.5, 0.5, -1), Vec3(0, 0, 1));
  ASSERT_FALSE(hits.empty());
  EXPECT_TRUE(any_grazing(hits));
}

TEST(Rays, ParityMatchesBruteForce) {
  std::mt19937_64 rng(17);
  const TriangleMesh mesh = bumpy_sphere(3, 8);
  const TriangleBvh bvh = build_bvh(mesh);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 o = random_vec(rng, -1.5, 1.5);
    const Vec3 d = random_unit(rng);
    const auto a = ray_intersections(bvh, o, d);
    const auto b = ray_intersections_brute_force(mesh, o, d);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a[k].t, b[k].t);
      EXPECT_EQ(a[k].face, b[k].face);
    }
  }
}

TEST(SignTest, AgreesWithAnalyticSphereAndBox) {
  std::mt19937_64 rng(23);
  const TriangleMesh sphere = shapes::icosphere(4);
  const TriangleBvh sphere_bvh = build_bvh(sphere);
  const TriangleMesh cube = shapes::box(Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5));
  const TriangleBvh cube_bvh = build_bvh(cube);
  int agree_sphere = 0, agree_cube = 0, tested_sphere = 0;
  for (const auto& p : random_points(rng, 10000, -1.2, 1.2)) {
    // The tessellated sphere lies between its inradius and radius 1; skip that shell.
    if (std::abs(p.norm() - 1.0) > 5e-3) {
      ++tested_sphere;
      agree_sphere += point_inside(sphere_bvh, p).inside == (p.norm() < 1.0);
    }
    agree_cube += point_inside(cube_bvh, p).inside == (p.cwiseAbs().maxCoeff() < 0.5);
  }
  EXPECT_EQ(agree_sphere, tested_sphere);
  EXPECT_EQ(agree_cube, 10000);
}

TEST(SignTest, GrazingRayIsRetried) {
  const TriangleMesh cube = shapes::box();
  // The first parity direction starts at a corner-aligned point so edges line up often;
  // whatever happens, a retried answer must still be correct.
  const auto r = point_inside_brute_force(cube, Vec3(0.5, 0.5, 0.5));
  EXPECT_TRUE(r.inside);
  EXPECT_TRUE(r.resolved);
}

TEST(Adjacency, SingleTriangle) {
  const MeshAdjacency adj = build_adjacency(single_triangle());
  ASSERT_EQ(adj.edges.size(), 3u);
  for (std::size_t e = 0; e < 3; ++e) EXPECT_EQ(adj.incident_face_count(e), 1);
  EXPECT_FALSE(is_watertight(adj));
}

TEST(Adjacency, ClosedCubeEuler) {
  const TriangleMesh cube = shapes::box();
  const MeshAdjacency adj = build_adjacency(cube);
  ASSERT_EQ(adj.edges.size(), 18u);
  for (std::size_t e = 0; e < adj.edges.size(); ++e) EXPECT_EQ(adj.incident_face_count(e), 2);
  EXPECT_EQ(static_cast<long>(cube.num_vertices()) - static_cast<long>(adj.edges.size()) +
                static_cast<long>(cube.num_faces()),
            2);
  EXPECT_TRUE(is_watertight(adj));
}

TEST(Adjacency, IcosphereMissingFaceIsNotWatertight) {
  TriangleMesh m = shapes::icosphere(2);
  EXPECT_TRUE(is_watertight(build_adjacency(m)));
  m.faces.erase(m.faces.begin() + 13);
  EXPECT_FALSE(is_watertight(build_adjacency(m)));
}

TEST(Adjacency, NonManifoldEdgeIsReported) {
  TriangleMesh m = single_triangle();
  m.vertices.emplace_back(0, 0, 1);
  m.vertices.emplace_back(0, 0, -1);
  m.faces.push_back({0, 1, 3});
  m.faces.push_back({1, 0, 4});
  try {
    build_adjacency(m);
    FAIL() << "expected NonManifoldError";
  } catch (const NonManifoldError& e) {
    EXPECT_EQ(e.edge(), (Edge{0, 1}));
  }
}

TEST(Adjacency, SymmetricNeighborsAndFaces) {
  const TriangleMesh m = bumpy_sphere(2, 3);
  const MeshAdjacency adj = build_adjacency(m);
  for (std::size_t v = 0; v < m.num_vertices(); ++v) {
    const auto nb = adj.neighbors(v);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    for (auto u : nb) {
      const auto back = adj.neighbors(u);
      EXPECT_TRUE(std::binary_search(back.begin(), back.end(), static_cast<std::int32_t>(v)));
    }
  }
  for (std::size_t f = 0; f < m.num_faces(); ++f) {
    for (auto g : adj.face_adjacency[f]) {
      ASSERT_GE(g, 0);
      const auto& other = adj.face_adjacency[g];
      EXPECT_NE(std::find(other.begin(), other.end(), static_cast<std::int32_t>(f)), other.end());
    }
  }
}

TEST(Adjacency, LaplacianRowsSumToZero) {
  TriangleMesh m = bumpy_sphere(2, 4);
  m.vertices.emplace_back(9, 9, 9);  // isolated vertex gets an empty row
  const MeshAdjacency adj = build_adjacency(m);
  Eigen::MatrixXd constant(m.num_vertices(), 3);
  constant.rowwise() = Eigen::RowVector3d(0.3, -1.7, 2.2);
  const Eigen::MatrixXd out = adj.uniform_laplacian * constant;
  EXPECT_LT(out.cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m.num_vertices()));
  EXPECT_LT((adj.uniform_laplacian * ones).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Adjacency, LaplacianIgnoresFaceOrder) {
  const TriangleMesh m = bumpy_sphere(2, 6);
  TriangleMesh shuffled = m;
  std::mt19937_64 rng(1);
  std::shuffle(shuffled.faces.begin(), shuffled.faces.end(), rng);
  for (auto& f : shuffled.faces) std::rotate(f.begin(), f.begin() + 1, f.end());
  const SparseMatrix a = build_adjacency(m).uniform_laplacian;
  const SparseMatrix b = build_adjacency(shuffled).uniform_laplacian;
  EXPECT_EQ((a - b).norm(), 0.0);
}
