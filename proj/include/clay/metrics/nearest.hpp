#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "clay/types.hpp"

namespace clay {

enum class NnMethod { Auto, BruteForce, GridHash };

/// Point sets larger than this use the grid index under NnMethod::Auto.
inline constexpr std::size_t kGridHashThreshold = 1000;

struct NearestNeighbor {
  std::int32_t index = -1;
  double sq_distance = std::numeric_limits<double>::infinity();
};

namespace detail {

inline void consider_point(const Vec3& q, std::span<const Vec3> targets, std::int32_t j, NearestNeighbor& best) {
  const double d2 = (q - targets[j]).squaredNorm();
  if (d2 < best.sq_distance || (d2 == best.sq_distance && j < best.index)) {
    best.sq_distance = d2;
    best.index = j;
  }
}

}  // namespace detail

/// Exact nearest neighbor by scanning every target; ties go to the lowest index.
inline NearestNeighbor nearest_brute_force(const Vec3& q, std::span<const Vec3> targets) {
  NearestNeighbor best;
  for (std::size_t j = 0; j < targets.size(); ++j) detail::consider_point(q, targets, static_cast<std::int32_t>(j), best);
  return best;
}

/// Uniform grid over the target set for exact nearest-neighbor queries. Cells
/// are searched in growing Chebyshev rings around the query cell until the
/// unvisited region is provably farther than the best candidate, so results
/// (including tie-breaking) are identical to nearest_brute_force.
class PointGrid {
 public:
  explicit PointGrid(std::span<const Vec3> targets) : targets_(targets) {
    if (targets.empty()) throw DomainError("nearest-neighbor index over an empty point set");
    Aabb box;
    for (const auto& p : targets) box.expand(p);
    lo_ = box.lo;
    cell_ = pick_cell_size(targets, box);
    std::size_t total = 1;
    for (int k = 0; k < 3; ++k) {
      dims_[k] = std::max(1, static_cast<int>(std::floor(box.extent()[k] / cell_)) + 1);
      total *= static_cast<std::size_t>(dims_[k]);
    }
    offsets_.assign(total + 1, 0);
    std::vector<std::size_t> cell_of(targets.size());
    for (std::size_t j = 0; j < targets.size(); ++j) {
      cell_of[j] = flat(cell_coords(targets[j]));
      ++offsets_[cell_of[j] + 1];
    }
    for (std::size_t c = 0; c < total; ++c) offsets_[c + 1] += offsets_[c];
    members_.resize(targets.size());
    std::vector<std::int32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t j = 0; j < targets.size(); ++j) members_[cursor[cell_of[j]]++] = static_cast<std::int32_t>(j);
  }

  double cell_size() const { return cell_; }

  NearestNeighbor nearest(const Vec3& q) const {
    NearestNeighbor best;
    const auto c = cell_coords(q);
    const int max_ring = std::max({dims_[0], dims_[1], dims_[2]});
    for (int r = 0; r <= max_ring; ++r) {
      visit_ring(c, r, q, best);
      const double bound = unvisited_bound(c, r, q);
      if (bound < 0.0) break;  // nothing left
      if (bound * bound > best.sq_distance) break;
    }
    return best;
  }

 private:
  // Median nearest-neighbor spacing of a strided subsample of at most 100 points.
  static double pick_cell_size(std::span<const Vec3> targets, const Aabb& box) {
    const std::size_t n = targets.size();
    const std::size_t m = std::min<std::size_t>(100, n);
    std::vector<double> d;
    d.reserve(m);
    for (std::size_t s = 0; s < m && n > 1; ++s) {
      const std::size_t i = s * n / m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) best = std::min(best, (targets[i] - targets[j]).squaredNorm());
      }
      d.push_back(std::sqrt(best));
    }
    double h = 0.0;
    if (!d.empty()) {
      std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
      h = d[d.size() / 2];
    }
    const double ext = box.extent().maxCoeff();
    // Keep the cell count near the point count.
    const double floor_h = ext / std::max(1.0, 2.0 * std::cbrt(static_cast<double>(n)));
    h = std::max(h, floor_h);
    if (!(h > 0.0)) h = 1.0;
    return h;
  }

  std::array<int, 3> cell_coords(const Vec3& p) const {
    std::array<int, 3> c;
    for (int k = 0; k < 3; ++k) {
      const double f = std::floor((p[k] - lo_[k]) / cell_);
      c[k] = f < 0.0 ? 0 : (f >= dims_[k] ? dims_[k] - 1 : static_cast<int>(f));
    }
    return c;
  }

  std::size_t flat(const std::array<int, 3>& c) const {
    return static_cast<std::size_t>(c[0]) +
           static_cast<std::size_t>(dims_[0]) * (static_cast<std::size_t>(c[1]) + static_cast<std::size_t>(dims_[1]) * c[2]);
  }

  void visit_cell(const std::array<int, 3>& c, const Vec3& q, NearestNeighbor& best) const {
    const std::size_t f = flat(c);
    for (auto i = offsets_[f]; i < offsets_[f + 1]; ++i) detail::consider_point(q, targets_, members_[i], best);
  }

  void visit_ring(const std::array<int, 3>& c, int r, const Vec3& q, NearestNeighbor& best) const {
    std::array<int, 3> lo, hi;
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::max(0, c[k] - r);
      hi[k] = std::min(dims_[k] - 1, c[k] + r);
    }
    for (int z = lo[2]; z <= hi[2]; ++z) {
      for (int y = lo[1]; y <= hi[1]; ++y) {
        const bool yz_shell = std::abs(z - c[2]) == r || std::abs(y - c[1]) == r;
        if (yz_shell) {
          for (int x = lo[0]; x <= hi[0]; ++x) visit_cell({x, y, z}, q, best);
        } else {
          if (c[0] - r >= 0) visit_cell({c[0] - r, y, z}, q, best);
          if (r > 0 && c[0] + r < dims_[0]) visit_cell({c[0] + r, y, z}, q, best);
        }
      }
    }
  }

  // Lower bound on the distance from q to any cell outside ring r, or -1 when
  // the rings already cover the grid.
  double unvisited_bound(const std::array<int, 3>& c, int r, const Vec3& q) const {
    double bound = std::numeric_limits<double>::infinity();
    bool remaining = false;
    for (int k = 0; k < 3; ++k) {
      if (c[k] - r > 0) {
        remaining = true;
        bound = std::min(bound, std::max(0.0, q[k] - (lo_[k] + (c[k] - r) * cell_)));
      }
      if (c[k] + r < dims_[k] - 1) {
        remaining = true;
        bound = std::min(bound, std::max(0.0, (lo_[k] + (c[k] + r + 1) * cell_) - q[k]));
      }
    }
    if (!remaining) return -1.0;
    // Floor-based binning can misplace a point by an ulp across a cell face.
    return std::max(0.0, bound - 1e-9 * cell_);
  }

  std::span<const Vec3> targets_;
  Vec3 lo_;
  double cell_ = 1.0;
  std::array<int, 3> dims_{1, 1, 1};
  std::vector<std::int32_t> offsets_;
  std::vector<std::int32_t> members_;
};

/// Nearest target for every query; per-query results do not depend on the method.
inline std::vector<NearestNeighbor> nearest_neighbors(std::span<const Vec3> queries, std::span<const Vec3> targets,
                                                      NnMethod method = NnMethod::Auto) {
  if (targets.empty()) throw DomainError("nearest-neighbor search over an empty point set");
  if (method == NnMethod::Auto) {
    method = std::max(queries.size(), targets.size()) > kGridHashThreshold ? NnMethod::GridHash : NnMethod::BruteForce;
  }
  std::vector<NearestNeighbor> out(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
  if (method == NnMethod::BruteForce) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = nearest_brute_force(queries[i], targets);
  } else {
    const PointGrid grid(targets);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = grid.nearest(queries[i]);
  }
  return out;
}

}  // namespace clay
