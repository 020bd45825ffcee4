#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "cli_run.hpp"
#include "clay/io.hpp"
#include "clay/shapes.hpp"

using namespace clay;
using clay::testing::run_cli;
using clay::testing::slurp;
using clay::testing::TempDir;

namespace {

const std::string kCli = CLAY_CLI_PATH;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    clay::testing::write_text(dir.file("cube.obj"), clay::testing::kUnitCubeObj);
    io::save_obj(dir.file("sphere.obj"), shapes::icosphere(2));
  }
  TempDir dir;
};

TEST_F(Cli, ChamferOfAFileWithItselfIsZero) {
  const auto r = run_cli(kCli, "metric --kind chamfer " + dir.arg("cube.obj") + " " + dir.arg("cube.obj"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "chamfer 0.000000000000\n");
}

TEST_F(Cli, SolidVoxelsHaveUnitSelfIou) {
  const auto c = run_cli(kCli, "convert --from obj --to kvox --resolution 32 --solid " + dir.arg("cube.obj") + " " +
                                   dir.arg("out.kvox"));
  ASSERT_EQ(c.exit_code, 0);
  const auto r = run_cli(kCli, "metric --kind iou " + dir.arg("out.kvox") + " " + dir.arg("out.kvox"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "iou 1.000000000000\n");

  const VoxelGrid grid = io::kvox_occupancy(io::read_kvox(dir.file("out.kvox")));
  EXPECT_EQ(grid.resolution, (Resolution{32, 32, 32}));
  EXPECT_EQ(static_cast<std::size_t>(std::count(grid.values.begin(), grid.values.end(), 1.0)), grid.cell_count());
}

TEST_F(Cli, GradcheckRasterizeSoftReportsNoFailures) {
  const auto r = run_cli(kCli, "gradcheck --op rasterize_soft");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("op rasterize_soft "), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(" failures 0 "), std::string::npos) << r.out;
}

TEST_F(Cli, AdjacencyStatsOfCube) {
  const auto r = run_cli(kCli, "adjacency --stats --mesh " + dir.arg("cube.obj"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("vertices 8\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("faces 12\n"), std::string::npos);
  EXPECT_NE(r.out.find("edges 18\n"), std::string::npos);
  EXPECT_NE(r.out.find("boundary_edges 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("euler_characteristic 2\n"), std::string::npos);
  EXPECT_NE(r.out.find("watertight yes\n"), std::string::npos);
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run_cli(kCli, "").exit_code, 2);
  EXPECT_EQ(run_cli(kCli, "frobnicate").exit_code, 2);
  EXPECT_EQ(run_cli(kCli, "metric --kind chamfer --bogus " + dir.arg("cube.obj") + " " + dir.arg("cube.obj")).exit_code,
            2);
  EXPECT_EQ(run_cli(kCli, "metric --kind volume " + dir.arg("cube.obj") + " " + dir.arg("cube.obj")).exit_code, 2);
  EXPECT_EQ(run_cli(kCli, "render --raster wire --mesh " + dir.arg("cube.obj") + " --out " + dir.arg("x.png")).exit_code,
            2);
  EXPECT_EQ(run_cli(kCli, "convert --from obj --to kvox " + dir.arg("cube.obj") + " " + dir.arg("x.kvox")).exit_code, 2)
      << "voxelizing needs --resolution";
  EXPECT_EQ(run_cli(kCli, "gradcheck --op no_such_op").exit_code, 2);
}

TEST_F(Cli, DataErrorsExitWithOne) {
  EXPECT_EQ(run_cli(kCli, "adjacency --stats --mesh " + dir.arg("missing.obj")).exit_code, 1);
  clay::testing::write_text(dir.file("bad.obj"), "v 0 0 0\nv 1 0 0\nf 1 2 3\n");
  EXPECT_EQ(run_cli(kCli, "adjacency --stats --mesh " + dir.arg("bad.obj")).exit_code, 1);
  clay::testing::write_text(dir.file("junk.kvox"), "not a voxel file");
  EXPECT_EQ(run_cli(kCli, "metric --kind iou " + dir.arg("junk.kvox") + " " + dir.arg("junk.kvox")).exit_code, 1);
}

TEST_F(Cli, MeshFormatsRoundTrip) {
  ASSERT_EQ(run_cli(kCli, "convert --from obj --to off " + dir.arg("sphere.obj") + " " + dir.arg("s.off")).exit_code, 0);
  ASSERT_EQ(run_cli(kCli, "convert --from off --to obj " + dir.arg("s.off") + " " + dir.arg("s2.obj")).exit_code, 0);
  // OFF carries no normals; positions and faces survive bit-exactly.
  const TriangleMesh a = io::read_obj(dir.file("sphere.obj")), b = io::read_obj(dir.file("s2.obj"));
  EXPECT_EQ(a.vertices, b.vertices);
  EXPECT_EQ(a.faces, b.faces);
}

TEST_F(Cli, SdfConversionYieldsAClosedSurface) {
  ASSERT_EQ(run_cli(kCli, "convert --from obj --to sdf --resolution 24 " + dir.arg("sphere.obj") + " " +
                              dir.arg("s.kvox"))
                .exit_code,
            0);
  ASSERT_EQ(run_cli(kCli, "convert --from sdf --to obj " + dir.arg("s.kvox") + " " + dir.arg("iso.obj")).exit_code, 0);
  const TriangleMesh iso = io::read_obj(dir.file("iso.obj"));
  EXPECT_GT(iso.num_faces(), 100u);
  for (const auto& v : iso.vertices) EXPECT_NEAR(v.norm(), 1.0, 0.1);
}

TEST_F(Cli, SampleWritesPointsOnTheSurface) {
  ASSERT_EQ(run_cli(kCli, "sample --n 500 --seed 3 --mesh " + dir.arg("cube.obj") + " --out " + dir.arg("p.xyz")).exit_code,
            0);
  const PointCloud pc = io::read_xyz(dir.file("p.xyz"));
  ASSERT_EQ(pc.size(), 500u);
  ASSERT_EQ(pc.normals.size(), 500u);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    EXPECT_NEAR(pc.points[i].cwiseAbs().maxCoeff(), 0.5, 1e-12);
    EXPECT_NEAR(pc.normals[i].norm(), 1.0, 1e-12);
  }
  const auto r = run_cli(kCli, "metric --kind p2s " + dir.arg("p.xyz") + " " + dir.arg("cube.obj"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "p2s 0.000000000000\n");
}

TEST_F(Cli, RenderWritesAnRgbaImage) {
  const auto r = run_cli(kCli, "render --size 48x32 --raster hard --shader phong --camera 0.3,0.4,0,0,0,3 --mesh " +
                                   dir.arg("sphere.obj") + " --out " + dir.arg("img.png"));
  ASSERT_EQ(r.exit_code, 0);
  const Image img = io::read_png(dir.file("img.png"));
  EXPECT_EQ(img.width, 48);
  EXPECT_EQ(img.height, 32);
  EXPECT_EQ(img.channels, 4);
  // The sphere covers the center pixel and misses the corner.
  EXPECT_EQ(img.at(24, 16, 3), 1.0);
  EXPECT_EQ(img.at(0, 0, 3), 0.0);
}

TEST_F(Cli, EmdOfAFileWithItselfIsZero) {
  const auto r = run_cli(kCli, "metric --kind emd --samples 200 " + dir.arg("sphere.obj") + " " + dir.arg("sphere.obj"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "emd 0.000000000000\n");
}

TEST_F(Cli, OutputsDoNotDependOnThreadCount) {
  const std::string cube = dir.arg("cube.obj"), sphere = dir.arg("sphere.obj");
  for (const char* threads : {"1", "3"}) {
    const std::string t = std::string("--threads ") + threads + " ";
    const std::string tag = threads;
    ASSERT_EQ(run_cli(kCli, t + "sample --n 2000 --seed 9 --mesh " + sphere + " --out " + dir.arg("p" + tag + ".xyz"))
                  .exit_code,
              0);
    ASSERT_EQ(run_cli(kCli, t + "convert --from obj --to kvox --solid --resolution 20 " + sphere + " " +
                                dir.arg("v" + tag + ".kvox"))
                  .exit_code,
              0);
    ASSERT_EQ(run_cli(kCli, t + "render --raster dib --size 40x40 --mesh " + sphere + " --out " +
                                dir.arg("r" + tag + ".png"))
                  .exit_code,
              0);
  }
  EXPECT_EQ(slurp(dir.file("p1.xyz")), slurp(dir.file("p3.xyz")));
  EXPECT_EQ(slurp(dir.file("v1.kvox")), slurp(dir.file("v3.kvox")));
  EXPECT_EQ(slurp(dir.file("r1.png")), slurp(dir.file("r3.png")));
  const auto m1 = run_cli(kCli, "--threads 1 metric --kind chamfer --seed 4 " + cube + " " + sphere);
  const auto m3 = run_cli(kCli, "--threads 3 metric --kind chamfer --seed 4 " + cube + " " + sphere);
  EXPECT_EQ(m1.exit_code, 0);
  EXPECT_EQ(m1.out, m3.out);
}

}  // namespace
