#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clay/io/text.hpp"
#include "clay/types.hpp"

namespace clay::io {

namespace detail {

struct ObjCorner {
  std::int32_t vertex = -1;
  std::int32_t normal = -1;
};

// Resolves a 1-based or negative (relative) OBJ index against `count` entries.
inline std::int32_t resolve_index(std::string_view tok, std::size_t count, std::size_t line, const char* what) {
  const std::int64_t raw = parse_int(tok, line);
  const std::int64_t n = static_cast<std::int64_t>(count);
  const std::int64_t idx = raw > 0 ? raw - 1 : n + raw;
  if (raw == 0 || idx < 0 || idx >= n) {
    throw ParseError(line, std::string(what) + " index " + std::to_string(raw) + " is out of range (" +
                               std::to_string(n) + " defined so far)");
  }
  return static_cast<std::int32_t>(idx);
}

}  // namespace detail

/// Reads the OBJ subset: v (3 or 6 numbers), vn, and f with v, v/vt, v//vn
/// or v/vt/vn corners. Polygons are fan-triangulated. Vertex normals are kept
/// when every corner names one and either each vertex gets a single normal or
/// the vn list runs parallel to the v list.
inline TriangleMesh parse_obj(std::string_view text) {
  TriangleMesh mesh;
  std::vector<Vec3> normals;
  std::vector<std::int32_t> vertex_normal;
  bool normals_consistent = true;
  bool parallel_normals = true;
  std::optional<bool> colored;
  for_each_line(text, [&](std::size_t line, std::string_view raw) {
    const auto hash = raw.find('#');
    const auto tok = tokenize(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (tok.empty()) return;
    if (tok[0] == "v") {
      if (tok.size() != 4 && tok.size() != 7) throw ParseError(line, "'v' needs 3 or 6 numbers");
      const bool has_color = tok.size() == 7;
      if (colored && *colored != has_color) throw ParseError(line, "vertex colors must be given for all vertices or none");
      colored = has_color;
      mesh.vertices.emplace_back(parse_double(tok[1], line), parse_double(tok[2], line), parse_double(tok[3], line));
      if (has_color) {
        mesh.vertex_colors.emplace_back(parse_double(tok[4], line), parse_double(tok[5], line),
                                        parse_double(tok[6], line));
      }
    } else if (tok[0] == "vn") {
      if (tok.size() != 4) throw ParseError(line, "'vn' needs 3 numbers");
      normals.emplace_back(parse_double(tok[1], line), parse_double(tok[2], line), parse_double(tok[3], line));
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw ParseError(line, "a face needs at least 3 corners");
      std::vector<detail::ObjCorner> corners;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const std::string_view c = tok[i];
        const auto s1 = c.find('/');
        detail::ObjCorner corner;
        corner.vertex = detail::resolve_index(c.substr(0, s1), mesh.vertices.size(), line, "vertex");
        if (s1 != std::string_view::npos) {
          const auto s2 = c.find('/', s1 + 1);
          if (s2 != std::string_view::npos && s2 + 1 < c.size()) {
            corner.normal = detail::resolve_index(c.substr(s2 + 1), normals.size(), line, "normal");
          }
        }
        corners.push_back(corner);
      }
      if (vertex_normal.size() < mesh.vertices.size()) vertex_normal.resize(mesh.vertices.size(), -1);
      for (const auto& c : corners) {
        parallel_normals &= c.normal == c.vertex;
        if (c.normal < 0) {
          normals_consistent = false;
        } else if (vertex_normal[c.vertex] < 0) {
          vertex_normal[c.vertex] = c.normal;
        } else if (vertex_normal[c.vertex] != c.normal && normals[vertex_normal[c.vertex]] != normals[c.normal]) {
          normals_consistent = false;
        }
      }
      for (std::size_t k = 1; k + 1 < corners.size(); ++k) {
        mesh.faces.push_back({corners[0].vertex, corners[k].vertex, corners[k + 1].vertex});
      }
    }
    // Everything else (vt, o, g, s, usemtl, mtllib, ...) is ignored.
  });
  vertex_normal.resize(mesh.vertices.size(), -1);
  if (parallel_normals && !mesh.faces.empty() && normals.size() == mesh.vertices.size()) {
    mesh.vertex_normals = std::move(normals);
  } else if (normals_consistent && !mesh.faces.empty() && !normals.empty()) {
    bool complete = true;
    for (auto n : vertex_normal) complete &= n >= 0;
    if (complete) {
      for (auto n : vertex_normal) mesh.vertex_normals.push_back(normals[n]);
    }
  }
  mesh.validate();
  return mesh;
}

/// Writes v (with colors when present), vn when normals are present, and f.
inline std::string write_obj(const TriangleMesh& mesh) {
  mesh.validate();
  std::string out;
  out.reserve(mesh.num_vertices() * 64 + mesh.num_faces() * 24);
  auto triple = [&](const char* tag, const Vec3& v) {
    out += tag;
    for (int k = 0; k < 3; ++k) {
      out += ' ';
      append_double(out, v[k]);
    }
  };
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    triple("v", mesh.vertices[i]);
    if (mesh.has_colors()) {
      for (int k = 0; k < 3; ++k) {
        out += ' ';
        append_double(out, mesh.vertex_colors[i][k]);
      }
    }
    out += '\n';
  }
  for (const auto& n : mesh.vertex_normals) {
    triple("vn", n);
    out += '\n';
  }
  for (const auto& f : mesh.faces) {
    out += 'f';
    for (auto idx : f) {
      const std::string i = std::to_string(idx + 1);
      out += ' ';
      out += i;
      if (mesh.has_normals()) out += "//" + i;
    }
    out += '\n';
  }
  return out;
}

inline TriangleMesh read_obj(const std::string& path) {
  try {
    return parse_obj(read_file(path));
  } catch (const ParseError& e) {
    throw e.in(path);
  }
}

inline void save_obj(const std::string& path, const TriangleMesh& mesh) { write_file(path, write_obj(mesh)); }

}  // namespace clay::io
