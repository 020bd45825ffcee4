#pragma once

#include <any>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "clay/error.hpp"
#include "clay/types.hpp"

namespace clay {

using Vector = Eigen::VectorXd;

struct ForwardResult {
  Vector output;
  std::any context;
};

/// A differentiable map R^input_dim -> R^output_dim with its vector-Jacobian
/// product. `signature`, when set, hashes the discrete choices made at x
/// (argmin owners, pixel owners); points with different signatures lie on
/// different smooth pieces.
struct DiffOp {
  std::string name;
  Eigen::Index input_dim = 0;
  Eigen::Index output_dim = 0;
  std::function<ForwardResult(const Vector&)> forward;
  std::function<Vector(const Vector& x, const std::any& context, const Vector& upstream)> vjp;
  std::function<std::uint64_t(const Vector&)> signature;

  ForwardResult run(const Vector& x) const {
    if (x.size() != input_dim) {
      throw ConfigError(name + ": input has " + std::to_string(x.size()) + " entries, expected " +
                        std::to_string(input_dim));
    }
    return forward(x);
  }

  Vector pullback(const Vector& x, const std::any& context, const Vector& upstream) const {
    if (upstream.size() != output_dim) {
      throw ConfigError(name + ": upstream has " + std::to_string(upstream.size()) + " entries, expected " +
                        std::to_string(output_dim));
    }
    return vjp(x, context, upstream);
  }
};

inline Vector flatten(std::span<const Vec3> points) {
  Vector out(static_cast<Eigen::Index>(points.size() * 3));
  for (std::size_t i = 0; i < points.size(); ++i) out.segment<3>(static_cast<Eigen::Index>(3 * i)) = points[i];
  return out;
}

inline std::vector<Vec3> unflatten(const Vector& x, Eigen::Index offset = 0, std::optional<std::size_t> count = {}) {
  const std::size_t n = count.value_or(static_cast<std::size_t>((x.size() - offset) / 3));
  std::vector<Vec3> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x.segment<3>(offset + static_cast<Eigen::Index>(3 * i));
  return out;
}

}  // namespace clay
