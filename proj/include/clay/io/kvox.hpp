#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "clay/io/text.hpp"
#include "clay/types.hpp"

namespace clay::io {

enum class KvoxKind : std::uint8_t { Occupancy = 0, Sdf = 1 };

/// In-memory image of a KVOX1 file. Values are stored as 32-bit floats,
/// x-fastest.
struct KvoxFile {
  KvoxKind kind = KvoxKind::Occupancy;
  Resolution resolution{0, 0, 0};
  Vec3 origin = Vec3::Zero();
  double voxel_size = 1.0;
  std::vector<float> values;
};

inline constexpr std::string_view kKvoxMagic = "KVOX1";
inline constexpr std::size_t kKvoxHeaderBytes = 5 + 1 + 3 * 4 + 4 * 8;

namespace detail {

template <class T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

template <class T>
T get_le(std::string_view in, std::size_t offset) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bits |= static_cast<U>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return std::bit_cast<T>(bits);
}

template <class Tag>
KvoxFile kvox_from_grid(const ScalarGrid<Tag>& grid, KvoxKind kind) {
  KvoxFile f;
  f.kind = kind;
  f.resolution = grid.resolution;
  f.origin = grid.origin;
  f.voxel_size = grid.voxel_size;
  f.values.reserve(grid.values.size());
  for (double v : grid.values) f.values.push_back(static_cast<float>(v));
  return f;
}

template <class Grid>
Grid kvox_to_grid(const KvoxFile& f) {
  Grid g(f.resolution, f.origin, f.voxel_size);
  for (std::size_t i = 0; i < f.values.size(); ++i) g.values[i] = static_cast<double>(f.values[i]);
  return g;
}

}  // namespace detail

inline KvoxFile make_kvox(const VoxelGrid& grid) { return detail::kvox_from_grid(grid, KvoxKind::Occupancy); }
inline KvoxFile make_kvox(const SdfGrid& grid) { return detail::kvox_from_grid(grid, KvoxKind::Sdf); }

inline std::string encode_kvox(const KvoxFile& f) {
  const std::size_t cells = static_cast<std::size_t>(f.resolution[0]) * f.resolution[1] * f.resolution[2];
  if (f.values.size() != cells) throw DomainError("kvox value count does not match its resolution");
  std::string out(kKvoxMagic);
  out.reserve(kKvoxHeaderBytes + 4 * cells);
  out.push_back(static_cast<char>(f.kind));
  for (int r : f.resolution) {
    if (r <= 0) throw DomainError("kvox resolution must be positive");
    detail::put_le(out, static_cast<std::uint32_t>(r));
  }
  for (int k = 0; k < 3; ++k) detail::put_le(out, f.origin[k]);
  detail::put_le(out, f.voxel_size);
  for (float v : f.values) detail::put_le(out, v);
  return out;
}

inline KvoxFile decode_kvox(std::string_view bytes) {
  if (bytes.size() < kKvoxHeaderBytes || bytes.substr(0, 5) != kKvoxMagic) {
    throw ParseError(1, "not a KVOX1 file");
  }
  KvoxFile f;
  const auto kind = static_cast<unsigned char>(bytes[5]);
  if (kind > 1) throw ParseError(1, "unknown kvox kind byte " + std::to_string(kind));
  f.kind = static_cast<KvoxKind>(kind);
  std::size_t off = 6;
  std::size_t cells = 1;
  for (int k = 0; k < 3; ++k, off += 4) {
    const auto r = detail::get_le<std::uint32_t>(bytes, off);
    if (r == 0 || r > (1u << 20)) throw ParseError(1, "kvox resolution " + std::to_string(r) + " is out of range");
    f.resolution[k] = static_cast<int>(r);
    cells *= r;
  }
  for (int k = 0; k < 3; ++k, off += 8) f.origin[k] = detail::get_le<double>(bytes, off);
  f.voxel_size = detail::get_le<double>(bytes, off);
  off += 8;
  if (bytes.size() != kKvoxHeaderBytes + 4 * cells) {
    throw ParseError(1, "kvox payload has " + std::to_string(bytes.size() - kKvoxHeaderBytes) + " bytes, expected " +
                            std::to_string(4 * cells));
  }
  f.values.resize(cells);
  for (std::size_t i = 0; i < cells; ++i, off += 4) f.values[i] = detail::get_le<float>(bytes, off);
  return f;
}

inline KvoxFile read_kvox(const std::string& path) {
  try {
    return decode_kvox(read_file(path));
  } catch (const ParseError& e) {
    throw e.in(path);
  }
}

inline void write_kvox(const std::string& path, const KvoxFile& f) { write_file(path, encode_kvox(f)); }

/// Occupancy view of a file; an SDF becomes occupied where its value is negative.
inline VoxelGrid kvox_occupancy(const KvoxFile& f) {
  VoxelGrid g = detail::kvox_to_grid<VoxelGrid>(f);
  if (f.kind == KvoxKind::Sdf) {
    for (auto& v : g.values) v = v < 0.0 ? 1.0 : 0.0;
  }
  return g;
}

inline SdfGrid kvox_sdf(const KvoxFile& f) {
  if (f.kind != KvoxKind::Sdf) throw DomainError("kvox file holds occupancy, not signed distance");
  return detail::kvox_to_grid<SdfGrid>(f);
}

}  // namespace clay::io
