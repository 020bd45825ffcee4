#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "clay/accel/adjacency.hpp"
#include "clay/accel/bvh.hpp"
#include "clay/convert.hpp"
#include "clay/rotation.hpp"
#include "clay/shapes.hpp"
#include "clay/transform.hpp"
#include "test_util.hpp"

namespace clay {
namespace {

double signed_volume(const TriangleMesh& m) {
  double v = 0.0;
  for (std::size_t f = 0; f < m.num_faces(); ++f) v += m.corner(f, 0).dot(m.corner(f, 1).cross(m.corner(f, 2)));
  return v / 6.0;
}

std::size_t occupied_count(const VoxelGrid& g) {
  std::size_t n = 0;
  for (double v : g.values) n += v >= 0.5;
  return n;
}

TriangleMesh two_triangles_3_to_1() {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {3, 0, 0}, {0, 1, 0}, {10, 0, 0}, {11, 0, 0}, {10, 1, 0}};
  m.faces = {{0, 1, 2}, {3, 4, 5}};
  return m;
}

// ---- sampling ----

TEST(Sampling, SingleTriangleStaysInSimplex) {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.faces = {{0, 1, 2}};
  const auto s = sample_points_on_mesh(m, 5000, 3);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s.face_indices[i], 0);
    EXPECT_GE(s.barycentric[i].minCoeff(), 0.0);
    EXPECT_NEAR(s.barycentric[i].sum(), 1.0, 1e-15);
  }
}

TEST(Sampling, FaceChoiceFollowsArea) {
  const auto s = sample_points_on_mesh(two_triangles_3_to_1(), 100000, 11);
  double zero = 0;
  for (auto f : s.face_indices) zero += f == 0;
  EXPECT_NEAR(zero / 100000.0, 0.75, 0.01);
}

TEST(Sampling, UnitSquareMean) {
  const auto s = sample_points_on_mesh(shapes::grid_plane(1), 100000, 5);
  Vec3 mean = Vec3::Zero();
  for (const auto& p : s.points) mean += p;
  mean /= 100000.0;
  EXPECT_NEAR(mean.x(), 0.5, 0.005);
  EXPECT_NEAR(mean.y(), 0.5, 0.005);
  EXPECT_NEAR(mean.z(), 0.0, 1e-15);
}

TEST(Sampling, DeterministicAndReconstructs) {
  const auto mesh = shapes::icosphere(2);
  const auto a = sample_points_on_mesh(mesh, 4000, 42);
  const auto b = sample_points_on_mesh(mesh, 4000, 42);
  const auto c = sample_points_on_mesh(mesh, 4000, 43);
  EXPECT_EQ(a.face_indices, b.face_indices);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.points[i], b.points[i]);
    differs |= a.points[i] != c.points[i];
  }
  EXPECT_TRUE(differs);
  const auto rebuilt = resample_fixed(mesh.vertices, mesh.faces, a);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE((rebuilt[i] - a.points[i]).norm(), 1e-12);
}

TEST(Sampling, DegenerateMeshRejected) {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  m.faces = {{0, 1, 2}};
  EXPECT_THROW(sample_points_on_mesh(m, 10, 0), DomainError);
  EXPECT_THROW(sample_points_on_mesh(shapes::tetrahedron(), 0, 0), DomainError);
}

TEST(Sampling, VjpBasics) {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.faces = {{0, 1, 2}};
  SampledPoints s;
  s.points = {m.vertices[0]};
  s.face_indices = {0};
  s.barycentric = {Vec3(1, 0, 0)};
  const std::vector<Vec3> up{Vec3(1, 2, 3)};
  const auto g = sample_points_vjp(m, s, up);
  EXPECT_EQ(g[0], Vec3(1, 2, 3));
  EXPECT_EQ(g[1], Vec3::Zero());
  EXPECT_EQ(g[2], Vec3::Zero());
  const std::vector<Vec3> zero{Vec3::Zero()};
  for (const auto& v : sample_points_vjp(m, s, zero)) EXPECT_EQ(v, Vec3::Zero());
}

TEST(Sampling, VjpMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  auto mesh = shapes::icosphere(1);
  for (auto& v : mesh.vertices) v += 0.1 * testing::random_vec(rng);
  const auto s = sample_points_on_mesh(mesh, 300, 9);
  const auto up = testing::random_points(rng, s.size());
  const auto g = sample_points_vjp(mesh, s, up);
  auto loss = [&](const std::vector<Vec3>& verts) {
    const auto pts = resample_fixed(verts, mesh.faces, s);
    double l = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) l += up[i].dot(pts[i]);
    return l;
  };
  const double eps = 1e-5;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    for (int k = 0; k < 3; ++k) {
      auto plus = mesh.vertices, minus = mesh.vertices;
      plus[v][k] += eps;
      minus[v][k] -= eps;
      const double fd = (loss(plus) - loss(minus)) / (2 * eps);
      EXPECT_LE(std::abs(fd - g[v][k]) / std::max({std::abs(fd), std::abs(g[v][k]), 1e-8}), 1e-6);
    }
  }
}

// ---- voxelization ----

TEST(Voxelize, UnitCubeSurfaceRes2) {
  const auto g = voxelize_mesh(shapes::box(), {2, 2, 2}, VoxelizeMode::Surface);
  EXPECT_EQ(occupied_count(g), 8u);
}

TEST(Voxelize, UnitCubeSolidRes8) {
  const auto g = voxelize_mesh(shapes::box(), {8, 8, 8}, VoxelizeMode::Solid);
  EXPECT_EQ(occupied_count(g), 512u);
}

TEST(Voxelize, SurfaceCellsMatchBruteForceBoxTests) {
  const auto mesh = shapes::icosphere(2);
  const auto g = voxelize_mesh(mesh, {12, 12, 12}, VoxelizeMode::Surface);
  const Vec3 half = Vec3::Constant(0.5 * g.voxel_size);
  for (int z = 0; z < 12; ++z)
    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 12; ++x) {
        bool any = false;
        for (std::size_t f = 0; f < mesh.num_faces() && !any; ++f) {
          any = triangle_box_overlap(g.cell_center(x, y, z), half, mesh.corner(f, 0), mesh.corner(f, 1),
                                     mesh.corner(f, 2));
        }
        EXPECT_EQ(g.at(x, y, z) == 1.0, any) << x << "," << y << "," << z;
      }
}

TEST(Voxelize, SphereCenterSolidVsSurface) {
  const auto mesh = shapes::icosphere(3);
  for (int r : {8, 9, 16}) {
    const auto solid = voxelize_mesh(mesh, {r, r, r}, VoxelizeMode::Solid);
    const auto surface = voxelize_mesh(mesh, {r, r, r}, VoxelizeMode::Surface);
    const int c = r / 2;
    EXPECT_EQ(solid.at(c, c, c), 1.0);
    EXPECT_EQ(surface.at(c, c, c), 0.0);
    for (std::size_t i = 0; i < solid.values.size(); ++i) EXPECT_LE(surface.values[i], solid.values[i]);
  }
}

TEST(Voxelize, SolidInteriorMatchesParityOracle) {
  const auto mesh = shapes::icosphere(2, 1.0, Vec3(0.1, -0.2, 0.05));
  const auto solid = voxelize_mesh(mesh, {14, 14, 14}, VoxelizeMode::Solid);
  const auto surface = voxelize_mesh(mesh, {14, 14, 14}, VoxelizeMode::Surface);
  for (int z = 0; z < 14; ++z)
    for (int y = 0; y < 14; ++y)
      for (int x = 0; x < 14; ++x) {
        if (surface.at(x, y, z) == 1.0) continue;
        const auto st = point_inside_brute_force(mesh, solid.cell_center(x, y, z));
        EXPECT_EQ(solid.at(x, y, z) == 1.0, st.inside);
      }
}

TEST(Voxelize, SolidNeedsWatertight) {
  auto mesh = shapes::icosphere(1);
  mesh.faces.pop_back();
  EXPECT_THROW(voxelize_mesh(mesh, {4, 4, 4}, VoxelizeMode::Solid), PreconditionError);
  EXPECT_NO_THROW(voxelize_mesh(mesh, {4, 4, 4}, VoxelizeMode::Surface));
}

// ---- SDF ----

TEST(Sdf, SphereCenterValue) {
  const auto sdf = mesh_to_sdfgrid(shapes::icosphere(3), {32, 32, 32});
  const Vec3 c = sdf.cell_center(16, 16, 16);
  EXPECT_LE(c.norm(), 1e-12);
  EXPECT_NEAR(sdf.at(16, 16, 16), -1.0, 5e-2);
}

TEST(Sdf, MatchesAnalyticSphere) {
  const auto sdf = mesh_to_sdfgrid(shapes::icosphere(4), {16, 16, 16});
  for (int z = 0; z < 16; ++z)
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        EXPECT_NEAR(sdf.at(x, y, z), sdf.cell_center(x, y, z).norm() - 1.0, 1e-2);
      }
}

TEST(Sdf, ZeroCrossingNearSurface) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    TriangleMesh mesh;
    if (trial % 2 == 0) {
      mesh = shapes::icosphere(2, 0.5 + std::abs(testing::random_vec(rng).x()), testing::random_vec(rng));
    } else {
      mesh = shapes::box(Vec3::Zero(), Vec3(1.0, 0.6, 1.4));
      mesh = [&] {
        const RigidTransform t(exp_so3(testing::random_vec(rng)), testing::random_vec(rng));
        for (auto& v : mesh.vertices) v = t.apply(v);
        return mesh;
      }();
    }
    const auto sdf = mesh_to_sdfgrid(mesh, {20, 20, 20});
    const TriangleBvh bvh(mesh);
    const double tol = std::sqrt(3.0) * sdf.voxel_size;
    int crossings = 0;
    for (int z = 0; z < 20; ++z)
      for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x)
          for (int axis = 0; axis < 3; ++axis) {
            std::array<int, 3> n{x, y, z};
            if (++n[axis] >= 20) continue;
            const double a = sdf.at(x, y, z), b = sdf.at(n[0], n[1], n[2]);
            if ((a < 0) == (b < 0)) continue;
            const double t = a / (a - b);
            const Vec3 p = (1 - t) * sdf.cell_center(x, y, z) + t * sdf.cell_center(n[0], n[1], n[2]);
            EXPECT_LE(bvh.closest_point(p).distance, tol);
            ++crossings;
          }
    EXPECT_GT(crossings, 0);
  }
}

TEST(Sdf, OutsideIsPositiveAndRequiresWatertight) {
  const auto sdf = mesh_to_sdfgrid(shapes::box(), {8, 8, 8});
  EXPECT_GT(sdf.at(0, 0, 0), 0.0);
  EXPECT_LT(sdf.at(4, 4, 4), 0.0);
  auto open = shapes::box();
  open.faces.pop_back();
  EXPECT_THROW(mesh_to_sdfgrid(open, {8, 8, 8}), PreconditionError);
}

// ---- marching cubes ----

SdfGrid analytic_sphere(int r, double half_width) {
  const double vs = 2 * half_width / r;
  SdfGrid g({r, r, r}, Vec3::Constant(-half_width), vs);
  for (int z = 0; z < r; ++z)
    for (int y = 0; y < r; ++y)
      for (int x = 0; x < r; ++x) g.at(x, y, z) = g.cell_center(x, y, z).norm() - 1.0;
  return g;
}

TEST(MarchingCubes, SphereVerticesOnSurface) {
  const auto g = analytic_sphere(32, 1.5);
  const auto m = sdfgrid_to_mesh(g);
  ASSERT_GT(m.num_faces(), 100u);
  for (const auto& v : m.vertices) EXPECT_NEAR(v.norm(), 1.0, 2 * g.voxel_size);
  EXPECT_GT(signed_volume(m), 0.0);
  EXPECT_NEAR(signed_volume(m), 4.0 / 3.0 * 3.14159265358979, 0.1);
}

TEST(MarchingCubes, WatertightAndNonDegenerate) {
  const auto m = sdfgrid_to_mesh(analytic_sphere(24, 1.4));
  const auto adj = build_adjacency(m);
  EXPECT_TRUE(is_watertight(adj));
  for (std::size_t f = 0; f < m.num_faces(); ++f) EXPECT_GT(m.face_area(f), 1e-18);
  std::vector<int> used(m.num_vertices(), 0);
  for (const auto& f : m.faces)
    for (auto i : f) used[i] = 1;
  for (int u : used) EXPECT_EQ(u, 1);
}

TEST(MarchingCubes, SamplesOnTheIsoValueAreWelded) {
  // Cube faces pass exactly through sample planes here, so many samples are 0.
  const auto cube = shapes::box(Vec3::Constant(-0.5), Vec3::Constant(0.5));
  const SdfGrid sdf = mesh_to_sdfgrid(cube, {16, 16, 16});
  ASSERT_GT(std::count(sdf.values.begin(), sdf.values.end(), 0.0), 0);
  const TriangleMesh m = sdfgrid_to_mesh(sdf);
  std::vector<std::array<double, 3>> pos;
  for (const auto& v : m.vertices) pos.push_back({v.x(), v.y(), v.z()});
  std::sort(pos.begin(), pos.end());
  EXPECT_EQ(std::adjacent_find(pos.begin(), pos.end()), pos.end());
  for (std::size_t f = 0; f < m.num_faces(); ++f) EXPECT_GT(m.face_area(f), 1e-18);
}

TEST(MarchingCubes, ConstantGridThrows) {
  SdfGrid g({4, 4, 4}, Vec3::Zero(), 1.0, 1.0);
  EXPECT_THROW(sdfgrid_to_mesh(g), EmptyMeshError);
  g.values.assign(g.values.size(), -1.0);
  EXPECT_THROW(sdfgrid_to_mesh(g), EmptyMeshError);
}

TEST(MarchingCubes, AllCasesProduceClosedOrientedPieces) {
  // Every corner configuration of a single cube padded by positive samples.
  for (int mask = 1; mask < 255; ++mask) {
    SdfGrid g({4, 4, 4}, Vec3::Zero(), 1.0, 1.0);
    for (int c = 0; c < 8; ++c) {
      if (mask & (1 << c)) g.at(1 + detail::kCubeCorners[c][0], 1 + detail::kCubeCorners[c][1],
                                1 + detail::kCubeCorners[c][2]) = -1.0;
    }
    const auto m = sdfgrid_to_mesh(g);
    EXPECT_TRUE(is_watertight(build_adjacency(m))) << mask;
    EXPECT_GT(signed_volume(m), 0.0) << mask;
  }
}

TEST(Shapes, OutwardOrientation) {
  EXPECT_NEAR(signed_volume(shapes::box()), 1.0, 1e-12);
  EXPECT_NEAR(signed_volume(shapes::tetrahedron()), std::sqrt(2.0) / 12.0, 1e-12);
  EXPECT_GT(signed_volume(shapes::icosphere(2)), 0.0);
}

TEST(MarchingCubes, MeshRoundTripChamferSmall) {
  const auto mesh = shapes::icosphere(3);
  const auto sdf = mesh_to_sdfgrid(mesh, {24, 24, 24});
  const auto out = sdfgrid_to_mesh(sdf);
  const TriangleBvh bvh(mesh);
  for (const auto& v : out.vertices) EXPECT_LE(bvh.closest_point(v).distance, sdf.voxel_size);
}

// ---- cubify ----

TEST(Cubify, SingleVoxel) {
  VoxelGrid g({1, 1, 1}, Vec3::Zero(), 1.0, 1.0);
  const auto m = voxel_to_mesh(g);
  EXPECT_EQ(m.num_vertices(), 8u);
  EXPECT_EQ(m.num_faces(), 12u);
  EXPECT_NEAR(signed_volume(m), 1.0, 1e-12);
  EXPECT_TRUE(is_watertight(build_adjacency(m)));
}

TEST(Cubify, TwoByOneBlock) {
  VoxelGrid g({3, 2, 2}, Vec3::Zero(), 0.5, 0.0);
  g.at(0, 1, 1) = 1.0;
  g.at(1, 1, 1) = 0.7;
  const auto m = voxel_to_mesh(g);
  EXPECT_EQ(m.num_faces(), 20u);
  EXPECT_EQ(m.num_vertices(), 12u);
  EXPECT_NEAR(signed_volume(m), 2 * 0.125, 1e-12);
}

TEST(Cubify, FullGridIsShell) {
  VoxelGrid g({3, 4, 5}, Vec3(1, 2, 3), 0.25, 1.0);
  const auto m = voxel_to_mesh(g);
  EXPECT_EQ(m.num_faces(), 2u * 2 * (3 * 4 + 4 * 5 + 3 * 5));
  EXPECT_TRUE(is_watertight(build_adjacency(m)));
  EXPECT_NEAR(signed_volume(m), 60 * 0.25 * 0.25 * 0.25, 1e-12);
}

TEST(Cubify, EmptyThrows) {
  VoxelGrid g({2, 2, 2}, Vec3::Zero(), 1.0, 0.2);
  EXPECT_THROW(voxel_to_mesh(g), EmptyMeshError);
}

// ---- point cloud <-> voxel ----

TEST(PointVoxel, SinglePoint) {
  PointCloud pc({Vec3(0.3, -2, 5)});
  const auto g = pointcloud_to_voxel(pc, {4, 4, 4});
  EXPECT_EQ(occupied_count(g), 1u);
}

TEST(PointVoxel, RoundTripGeometry) {
  std::mt19937_64 rng(4);
  PointCloud pc(testing::random_points(rng, 500));
  const auto g = pointcloud_to_voxel(pc, {10, 10, 10});
  const auto back = voxel_to_pointcloud(g);
  EXPECT_LE(back.size(), pc.size());
  for (const auto& c : back.points) {
    double best = 1e300;
    for (const auto& p : pc.points) best = std::min(best, (p - c).norm());
    EXPECT_LE(best, std::sqrt(3.0) / 2 * g.voxel_size * (1 + 1e-12));
  }
  for (const auto& p : pc.points) {
    const Vec3 rel = (p - g.origin) / g.voxel_size;
    EXPECT_TRUE((rel.array() >= 0).all() && (rel.array() <= 10).all());
  }
}

TEST(PointVoxel, EmptyInputs) {
  EXPECT_THROW(pointcloud_to_voxel(PointCloud(), {2, 2, 2}), DomainError);
  EXPECT_THROW(voxel_to_pointcloud(VoxelGrid({2, 2, 2}, Vec3::Zero(), 1.0)), DomainError);
}

// ---- ODM ----

TEST(Odm, EmptyAndFull) {
  VoxelGrid empty({3, 4, 5}, Vec3::Zero(), 1.0, 0.0);
  VoxelGrid full({3, 4, 5}, Vec3::Zero(), 1.0, 1.0);
  for (const auto& o : voxel_to_odms(empty)) {
    for (int d : o.depths) EXPECT_EQ(d, o.res_w);
  }
  for (const auto& o : voxel_to_odms(full)) {
    for (int d : o.depths) EXPECT_EQ(d, 0);
  }
  const auto ox = voxel_to_odm(full, Axis::X, Direction::Positive);
  EXPECT_EQ(ox.res_u, 4);
  EXPECT_EQ(ox.res_v, 5);
  EXPECT_EQ(ox.res_w, 3);
}

TEST(Odm, DepthCountsFromEntryFace) {
  VoxelGrid g({5, 1, 1}, Vec3::Zero(), 1.0, 0.0);
  g.at(1, 0, 0) = 1.0;
  EXPECT_EQ(voxel_to_odm(g, Axis::X, Direction::Positive).at(0, 0), 1);
  EXPECT_EQ(voxel_to_odm(g, Axis::X, Direction::Negative).at(0, 0), 3);
}

VoxelGrid brute_force_hull(const VoxelGrid& shape) {
  VoxelGrid out(shape.resolution, shape.origin, shape.voxel_size, 1.0);
  const auto r = shape.resolution;
  for (int z = 0; z < r[2]; ++z)
    for (int y = 0; y < r[1]; ++y)
      for (int x = 0; x < r[0]; ++x) {
        const std::array<int, 3> c{x, y, z};
        for (int axis = 0; axis < 3 && out.at(x, y, z) == 1.0; ++axis) {
          for (int dir : {1, -1}) {
            // Occupied cell at or before c when entering from this side?
            bool blocked = false;
            std::array<int, 3> p = c;
            for (int s = dir > 0 ? 0 : r[axis] - 1; dir > 0 ? s <= c[axis] : s >= c[axis]; s += dir) {
              p[axis] = s;
              blocked |= shape.at(p[0], p[1], p[2]) >= 0.5;
            }
            if (!blocked) out.at(x, y, z) = 0.0;
          }
        }
      }
  return out;
}

TEST(Odm, CarvingReproducesVisualHull) {
  const auto sphere = voxelize_mesh(shapes::icosphere(3), {32, 32, 32}, VoxelizeMode::Solid);
  const auto odms = voxel_to_odms(sphere);
  VoxelGrid full(sphere.resolution, sphere.origin, sphere.voxel_size, 1.0);
  const auto carved = odm_carve(full, odms);
  EXPECT_EQ(carved.values, brute_force_hull(sphere).values);
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < carved.values.size(); ++i) {
    inter += carved.values[i] >= 0.5 && sphere.values[i] >= 0.5;
    uni += carved.values[i] >= 0.5 || sphere.values[i] >= 0.5;
  }
  EXPECT_GE(static_cast<double>(inter) / uni, 0.8);
}

TEST(Odm, ResolutionMismatch) {
  VoxelGrid a({4, 4, 4}, Vec3::Zero(), 1.0, 1.0);
  VoxelGrid b({4, 4, 5}, Vec3::Zero(), 1.0, 1.0);
  const auto odms = voxel_to_odms(b);
  EXPECT_THROW(odm_carve(a, odms), DomainError);
}

}  // namespace
}  // namespace clay
