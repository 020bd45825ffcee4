#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "clay/io/text.hpp"
#include "clay/types.hpp"

namespace clay::io {

/// Reads ASCII OFF: header, "nv nf ne", nv vertex lines, nf polygon lines
/// ("k i0 ... ik-1", extra trailing color values ignored). Comments start
/// with '#'. Polygons are fan-triangulated.
inline TriangleMesh parse_off(std::string_view text) {
  TriangleMesh mesh;
  enum class Stage { Header, Counts, Vertices, Faces, Done } stage = Stage::Header;
  std::size_t nv = 0, nf = 0, faces_read = 0, last_line = 0;
  for_each_line(text, [&](std::size_t line, std::string_view raw) {
    last_line = line;
    const auto hash = raw.find('#');
    auto tok = tokenize(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (tok.empty()) return;
    switch (stage) {
      case Stage::Header:
        if (tok[0] != "OFF") throw ParseError(line, "missing OFF header");
        tok.erase(tok.begin());
        stage = Stage::Counts;
        if (tok.empty()) return;
        [[fallthrough]];
      case Stage::Counts: {
        if (tok.size() < 2) throw ParseError(line, "expected vertex and face counts");
        const auto v = parse_int(tok[0], line), f = parse_int(tok[1], line);
        if (v < 0 || f < 0) throw ParseError(line, "negative element count");
        nv = static_cast<std::size_t>(v);
        nf = static_cast<std::size_t>(f);
        mesh.vertices.reserve(nv);
        stage = nv ? Stage::Vertices : nf ? Stage::Faces : Stage::Done;
        return;
      }
      case Stage::Vertices:
        if (tok.size() < 3) throw ParseError(line, "a vertex needs 3 coordinates");
        mesh.vertices.emplace_back(parse_double(tok[0], line), parse_double(tok[1], line), parse_double(tok[2], line));
        if (mesh.vertices.size() == nv) stage = nf ? Stage::Faces : Stage::Done;
        return;
      case Stage::Faces: {
        const auto k = parse_int(tok[0], line);
        if (k < 3) throw ParseError(line, "a face needs at least 3 corners");
        if (tok.size() < static_cast<std::size_t>(k) + 1) throw ParseError(line, "face lists fewer indices than declared");
        std::vector<std::int32_t> idx;
        for (std::int64_t i = 1; i <= k; ++i) {
          const auto v = parse_int(tok[static_cast<std::size_t>(i)], line);
          if (v < 0 || v >= static_cast<std::int64_t>(nv)) {
            throw ParseError(line, "vertex index " + std::to_string(v) + " is out of range");
          }
          idx.push_back(static_cast<std::int32_t>(v));
        }
        for (std::size_t i = 1; i + 1 < idx.size(); ++i) mesh.faces.push_back({idx[0], idx[i], idx[i + 1]});
        if (++faces_read == nf) stage = Stage::Done;
        return;
      }
      case Stage::Done:
        throw ParseError(line, "unexpected data after the last face");
    }
  });
  if (stage != Stage::Done) throw ParseError(last_line, "file ends before all declared elements");
  mesh.validate();
  return mesh;
}

inline std::string write_off(const TriangleMesh& mesh) {
  mesh.validate();
  std::string out = "OFF\n" + std::to_string(mesh.num_vertices()) + ' ' + std::to_string(mesh.num_faces()) + " 0\n";
  for (const auto& v : mesh.vertices) {
    for (int k = 0; k < 3; ++k) {
      if (k) out += ' ';
      append_double(out, v[k]);
    }
    out += '\n';
  }
  for (const auto& f : mesh.faces) {
    out += "3 " + std::to_string(f[0]) + ' ' + std::to_string(f[1]) + ' ' + std::to_string(f[2]) + '\n';
  }
  return out;
}

inline TriangleMesh read_off(const std::string& path) {
  try {
    return parse_off(read_file(path));
  } catch (const ParseError& e) {
    throw e.in(path);
  }
}

inline void save_off(const std::string& path, const TriangleMesh& mesh) { write_file(path, write_off(mesh)); }

}  // namespace clay::io
