// Command-line front end: conversions, rendering, metrics and gradient checks.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clay/accel/adjacency.hpp"
#include "clay/convert.hpp"
#include "clay/gradcheck.hpp"
#include "clay/io.hpp"
#include "clay/metrics.hpp"
#include "clay/parallel.hpp"
#include "clay/render.hpp"

namespace {

using namespace clay;

enum class Format { Obj, Off, Kvox, Sdf, Xyz };

Format parse_format(const std::string& s) {
  if (s == "obj") return Format::Obj;
  if (s == "off") return Format::Off;
  if (s == "kvox") return Format::Kvox;
  if (s == "sdf") return Format::Sdf;
  if (s == "xyz") return Format::Xyz;
  throw ConfigError("unknown format '" + s + "' (expected obj, off, kvox, sdf or xyz)");
}

bool is_mesh(Format f) { return f == Format::Obj || f == Format::Off; }

std::vector<double> parse_list(const std::string& text, std::size_t count, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(io::parse_double(std::string_view(item).substr(item.find_first_not_of(' ')), 0));
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != count) throw ConfigError(what + " needs " + std::to_string(count) + " comma-separated numbers");
  return out;
}

TriangleMesh load_mesh(Format f, const std::string& path) {
  return f == Format::Obj ? io::read_obj(path) : io::read_off(path);
}

void store_mesh(Format f, const std::string& path, const TriangleMesh& m) {
  if (f == Format::Obj) io::save_obj(path, m);
  else io::save_off(path, m);
}

Resolution cube(int r) {
  if (r <= 0) throw ConfigError("--resolution must be positive");
  return {r, r, r};
}

// ---- convert ----

struct ConvertArgs {
  std::string from, to, input, output;
  int resolution = 0;
  bool solid = false;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
};

void run_convert(const ConvertArgs& a) {
  const Format from = parse_format(a.from), to = parse_format(a.to);
  auto need_res = [&] {
    if (a.resolution <= 0) throw ConfigError("converting to " + a.to + " needs --resolution");
    return cube(a.resolution);
  };
  if (is_mesh(from)) {
    const TriangleMesh mesh = load_mesh(from, a.input);
    switch (to) {
      case Format::Obj:
      case Format::Off: return store_mesh(to, a.output, mesh);
      case Format::Kvox:
        return io::write_kvox(a.output, io::make_kvox(voxelize_mesh(
                                             mesh, need_res(), a.solid ? VoxelizeMode::Solid : VoxelizeMode::Surface)));
      case Format::Sdf: return io::write_kvox(a.output, io::make_kvox(mesh_to_sdfgrid(mesh, need_res())));
      case Format::Xyz:
        return io::save_xyz(a.output, PointCloud(sample_points_on_mesh(mesh, a.samples, a.seed).points));
    }
  }
  if (from == Format::Kvox || from == Format::Sdf) {
    const io::KvoxFile f = io::read_kvox(a.input);
    if (from == Format::Sdf && f.kind != io::KvoxKind::Sdf) throw DomainError(a.input + " holds occupancy, not sdf");
    switch (to) {
      case Format::Obj:
      case Format::Off:
        return store_mesh(to, a.output,
                          f.kind == io::KvoxKind::Sdf ? sdfgrid_to_mesh(io::kvox_sdf(f))
                                                      : voxel_to_mesh(io::kvox_occupancy(f)));
      case Format::Kvox: return io::write_kvox(a.output, io::make_kvox(io::kvox_occupancy(f)));
      case Format::Xyz: return io::save_xyz(a.output, voxel_to_pointcloud(io::kvox_occupancy(f)));
      case Format::Sdf: break;
    }
  }
  if (from == Format::Xyz) {
    const PointCloud pc = io::read_xyz(a.input);
    if (to == Format::Kvox) return io::write_kvox(a.output, io::make_kvox(pointcloud_to_voxel(pc, need_res())));
    if (to == Format::Xyz) return io::save_xyz(a.output, pc);
  }
  throw ConfigError("no conversion from " + a.from + " to " + a.to);
}

// ---- render ----

struct RenderArgs {
  std::string mesh, out, raster = "hard", shader = "lambertian", camera = "0,0,0,0,0,3", size = "256x256";
  std::optional<double> sigma, gamma, focal, delta;
  std::string light = "0,0,-1";
  double ambient = 0.1;
  bool orthographic = false;
};

void run_render(const RenderArgs& a) {
  int w = 0, h = 0;
  {
    const auto x = a.size.find('x');
    try {
      if (x == std::string::npos) throw ConfigError("");
      w = std::stoi(a.size.substr(0, x));
      h = std::stoi(a.size.substr(x + 1));
    } catch (const std::exception&) {
      throw ConfigError("--size must look like WxH");
    }
    if (w <= 0 || h <= 0) throw ConfigError("--size must be positive");
  }
  const auto cam = parse_list(a.camera, 6, "--camera");
  const RigidTransform pose(euler_to_rotation(Vec3(cam[0], cam[1], cam[2]), EulerConvention::XYZ),
                            Vec3(cam[3], cam[4], cam[5]));
  RenderPipeline p;
  const double focal = a.focal.value_or(static_cast<double>(std::max(w, h)));
  p.camera = a.orthographic ? Camera::orthographic(pose, w, h, focal) : Camera::perspective(pose, w, h, focal);
  if (a.raster == "hard") p.rasterizer = RasterizerKind::Hard;
  else if (a.raster == "soft") p.rasterizer = RasterizerKind::Soft;
  else if (a.raster == "dib") p.rasterizer = RasterizerKind::Dib;
  else throw ConfigError("--raster must be hard, soft or dib");
  if (a.shader == "lambertian") p.shader = ShaderKind::Lambertian;
  else if (a.shader == "phong") p.shader = ShaderKind::Phong;
  else if (a.shader == "cosine") p.shader = ShaderKind::Cosine;
  else if (a.shader == "unlit") p.shader = ShaderKind::Unlit;
  else throw ConfigError("--shader must be lambertian, phong, cosine or unlit");
  const auto l = parse_list(a.light, 3, "--light");
  p.lights = {Light::ambient(Vec3::Constant(a.ambient)), Light::directional(Vec3(l[0], l[1], l[2]))};
  if (a.sigma) p.soft.sigma = *a.sigma;
  if (a.gamma) p.soft.gamma = *a.gamma;
  if (a.delta) p.dib_delta = *a.delta;
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  const TriangleMesh mesh = io::read_mesh(a.mesh);
  const RenderOutput out = render(p, mesh);
  io::write_png(io::with_alpha(out.color, out.alpha), a.out);
}

// ---- metric ----

struct MetricArgs {
  std::string kind, a, b;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  double epsilon = 1e-6;
};

std::vector<Vec3> load_points(const std::string& path, std::size_t samples, std::uint64_t seed) {
  const std::string ext = io::extension(path);
  if (ext == "xyz") return io::read_xyz(path).points;
  return sample_points_on_mesh(io::read_mesh(path), samples, seed).points;
}

void print_metric(const std::string& name, double value) { std::printf("%s %.12f\n", name.c_str(), value); }

void run_metric(const MetricArgs& a) {
  if (a.kind == "chamfer") {
    const auto pa = load_points(a.a, a.samples, a.seed), pb = load_points(a.b, a.samples, a.seed);
    return print_metric("chamfer", chamfer_distance(std::span<const Vec3>(pa), std::span<const Vec3>(pb)).value);
  }
  if (a.kind == "emd") {
    const auto pa = load_points(a.a, a.samples, a.seed), pb = load_points(a.b, a.samples, a.seed);
    return print_metric("emd", emd_approx(pa, pb, a.epsilon).cost);
  }
  if (a.kind == "iou") {
    return print_metric("iou", voxel_iou(io::kvox_occupancy(io::read_kvox(a.a)), io::kvox_occupancy(io::read_kvox(a.b))));
  }
  if (a.kind == "p2s") {
    const auto pa = load_points(a.a, a.samples, a.seed);
    return print_metric("p2s", point_to_surface(pa, io::read_mesh(a.b)).value);
  }
  throw ConfigError("--kind must be chamfer, emd, iou or p2s");
}

// ---- gradcheck ----

struct GradcheckArgs {
  std::string op;
  std::optional<double> tol;
  std::optional<int> instances;
};

bool run_gradcheck_cmd(const GradcheckArgs& a) {
  std::vector<std::string> ops;
  if (a.op == "all") ops = gradcheck_op_names();
  else ops = {a.op};
  bool ok = true;
  for (const auto& name : ops) {
    if (std::find(gradcheck_op_names().begin(), gradcheck_op_names().end(), name) == gradcheck_op_names().end()) {
      throw ConfigError("unknown --op '" + name + "'");
    }
    const FdReport r = run_gradcheck(name, a.tol, a.instances);
    std::printf("op %s probes %zu checked %zu skipped %zu failures %zu max_rel_error %.3e tol %.1e\n", name.c_str(),
                r.probes.size(), r.checked(), r.skipped(), r.failures(), r.max_rel_error(), r.tol);
    ok &= r.passed();
  }
  return ok;
}

// ---- sample / adjacency ----

struct SampleArgs {
  std::string mesh, out;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
};

void run_sample(const SampleArgs& a) {
  const TriangleMesh mesh = io::read_mesh(a.mesh);
  const SampledPoints s = sample_points_on_mesh(mesh, a.n, a.seed);
  PointCloud pc(s.points);
  pc.normals.reserve(s.size());
  for (auto f : s.face_indices) pc.normals.push_back(mesh.face_cross(static_cast<std::size_t>(f)).normalized());
  io::save_xyz(a.out, pc);
}

void run_adjacency(const std::string& path) {
  const TriangleMesh mesh = io::read_mesh(path);
  const MeshAdjacency adj = build_adjacency(mesh);
  std::size_t max_valence = 0, isolated = 0;
  for (std::size_t v = 0; v < adj.num_vertices; ++v) {
    const std::size_t k = adj.neighbors(v).size();
    max_valence = std::max(max_valence, k);
    isolated += k == 0;
  }
  const auto euler = static_cast<long long>(mesh.num_vertices()) - static_cast<long long>(adj.edges.size()) +
                     static_cast<long long>(mesh.num_faces());
  std::printf("vertices %zu\nfaces %zu\nedges %zu\nboundary_edges %zu\nisolated_vertices %zu\nmax_valence %zu\n"
              "euler_characteristic %lld\nwatertight %s\n",
              mesh.num_vertices(), mesh.num_faces(), adj.edges.size(), adj.boundary_edge_count(), isolated, max_valence,
              euler, is_watertight(adj) ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clay: mesh, voxel and point-cloud conversion, rendering and metrics"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  ConvertArgs conv;
  auto* c = app.add_subcommand("convert", "Convert between mesh, voxel, sdf and point-cloud files");
  c->add_option("--from", conv.from, "Input format: obj, off, kvox, sdf, xyz")->required();
  c->add_option("--to", conv.to, "Output format: obj, off, kvox, sdf, xyz")->required();
  c->add_option("--resolution", conv.resolution, "Grid resolution per axis");
  c->add_flag("--solid", conv.solid, "Fill the interior when voxelizing");
  c->add_option("--samples", conv.samples, "Point count when sampling a mesh");
  c->add_option("--seed", conv.seed, "Sampling seed");
  c->add_option("input", conv.input)->required();
  c->add_option("output", conv.output)->required();

  RenderArgs ren;
  auto* r = app.add_subcommand("render", "Render a mesh to a PNG");
  r->add_option("--mesh", ren.mesh, "Input mesh (.obj or .off)")->required();
  r->add_option("--out", ren.out, "Output PNG")->required();
  r->add_option("--raster", ren.raster, "hard, soft or dib");
  r->add_option("--shader", ren.shader, "lambertian, phong, cosine or unlit");
  r->add_option("--camera", ren.camera, "World-to-camera pose: rx,ry,rz (XYZ Euler, radians),tx,ty,tz");
  r->add_option("--size", ren.size, "Image size WxH");
  r->add_option("--focal", ren.focal, "Focal length in pixels (orthographic: pixels per unit)");
  r->add_flag("--ortho", ren.orthographic, "Orthographic projection");
  r->add_option("--sigma", ren.sigma, "Soft rasterizer sharpness (pixels^2)");
  r->add_option("--gamma", ren.gamma, "Soft rasterizer depth temperature");
  r->add_option("--delta", ren.delta, "DIB background falloff (pixels)");
  r->add_option("--light", ren.light, "World direction toward the light: dx,dy,dz");
  r->add_option("--ambient", ren.ambient, "Ambient intensity");

  MetricArgs met;
  auto* m = app.add_subcommand("metric", "Compare two shapes");
  m->add_option("--kind", met.kind, "chamfer, emd, iou or p2s")->required();
  m->add_option("--samples", met.samples, "Points sampled from mesh inputs");
  m->add_option("--seed", met.seed, "Sampling seed");
  m->add_option("--epsilon", met.epsilon, "EMD auction tolerance");
  m->add_option("a", met.a)->required();
  m->add_option("b", met.b)->required();

  GradcheckArgs gc;
  auto* g = app.add_subcommand("gradcheck", "Finite-difference check of a registered gradient");
  g->add_option("--op", gc.op, "Op name or 'all'")->required();
  g->add_option("--tol", gc.tol, "Relative tolerance");
  g->add_option("--instances", gc.instances, "Number of seeded configurations");

  SampleArgs smp;
  auto* s = app.add_subcommand("sample", "Sample points uniformly on a mesh surface");
  s->add_option("--mesh", smp.mesh)->required();
  s->add_option("--n", smp.n)->required();
  s->add_option("--seed", smp.seed);
  s->add_option("--out", smp.out)->required();

  std::string adj_mesh;
  bool stats = false;
  auto* a = app.add_subcommand("adjacency", "Print connectivity statistics");
  a->add_option("--mesh", adj_mesh)->required();
  a->add_flag("--stats", stats, "Print statistics (the only output mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    set_thread_count(threads);
    if (*c) run_convert(conv);
    else if (*r) run_render(ren);
    else if (*m) run_metric(met);
    else if (*g) return run_gradcheck_cmd(gc) ? 0 : 1;
    else if (*s) run_sample(smp);
    else if (*a) run_adjacency(adj_mesh);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
