#pragma once

#include <cctype>
#include <string>

#include "clay/io/obj.hpp"
#include "clay/io/off.hpp"

namespace clay::io {

inline std::string extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return {};
  std::string ext = path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

/// Dispatches on the extension: .obj or .off.
inline TriangleMesh read_mesh(const std::string& path) {
  const std::string ext = extension(path);
  if (ext == "obj") return read_obj(path);
  if (ext == "off") return read_off(path);
  throw ConfigError("unsupported mesh extension '." + ext + "' (expected .obj or .off)");
}

inline void save_mesh(const std::string& path, const TriangleMesh& mesh) {
  const std::string ext = extension(path);
  if (ext == "obj") return save_obj(path, mesh);
  if (ext == "off") return save_off(path, mesh);
  throw ConfigError("unsupported mesh extension '." + ext + "' (expected .obj or .off)");
}

}  // namespace clay::io
