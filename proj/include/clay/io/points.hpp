#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "clay/io/text.hpp"
#include "clay/types.hpp"

namespace clay::io {

/// One point per line: "x y z" or "x y z nx ny nz". '#' starts a comment.
inline PointCloud parse_xyz(std::string_view text) {
  PointCloud pc;
  std::optional<bool> with_normals;
  for_each_line(text, [&](std::size_t line, std::string_view raw) {
    const auto hash = raw.find('#');
    const auto tok = tokenize(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (tok.empty()) return;
    if (tok.size() != 3 && tok.size() != 6) throw ParseError(line, "a point needs 3 or 6 numbers");
    const bool n = tok.size() == 6;
    if (with_normals && *with_normals != n) throw ParseError(line, "normals must be given for all points or none");
    with_normals = n;
    pc.points.emplace_back(parse_double(tok[0], line), parse_double(tok[1], line), parse_double(tok[2], line));
    if (n) pc.normals.emplace_back(parse_double(tok[3], line), parse_double(tok[4], line), parse_double(tok[5], line));
  });
  pc.validate();
  return pc;
}

inline std::string write_xyz(const PointCloud& pc) {
  pc.validate();
  std::string out;
  out.reserve(pc.size() * 60);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      if (k) out += ' ';
      append_double(out, pc.points[i][k]);
    }
    if (!pc.normals.empty()) {
      for (int k = 0; k < 3; ++k) {
        out += ' ';
        append_double(out, pc.normals[i][k]);
      }
    }
    out += '\n';
  }
  return out;
}

inline PointCloud read_xyz(const std::string& path) {
  try {
    return parse_xyz(read_file(path));
  } catch (const ParseError& e) {
    throw e.in(path);
  }
}

inline void save_xyz(const std::string& path, const PointCloud& pc) { write_file(path, write_xyz(pc)); }

}  // namespace clay::io
