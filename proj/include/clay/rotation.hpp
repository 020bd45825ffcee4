#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>

#include "clay/types.hpp"

namespace clay {

/// Intrinsic Euler axis orders. Angles are given in the order the axes are listed.
enum class EulerConvention { XYZ, ZYX };

inline EulerConvention parse_euler_convention(std::string_view tag) {
  if (tag == "XYZ" || tag == "xyz") return EulerConvention::XYZ;
  if (tag == "ZYX" || tag == "zyx") return EulerConvention::ZYX;
  throw ConfigError("unknown Euler convention '" + std::string(tag) + "' (expected XYZ or ZYX)");
}

inline Mat3 axis_rotation(int axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 r = Mat3::Identity();
  const int a = (axis + 1) % 3;
  const int b = (axis + 2) % 3;
  r(a, a) = c;
  r(a, b) = -s;
  r(b, a) = s;
  r(b, b) = c;
  return r;
}

/// XYZ: Rx(a0) Ry(a1) Rz(a2).  ZYX: Rz(a0) Ry(a1) Rx(a2).
inline Mat3 euler_to_rotation(const Vec3& angles, EulerConvention convention) {
  if (!angles.allFinite()) throw DomainError("non-finite Euler angle");
  switch (convention) {
    case EulerConvention::XYZ:
      return axis_rotation(0, angles[0]) * axis_rotation(1, angles[1]) * axis_rotation(2, angles[2]);
    case EulerConvention::ZYX:
      return axis_rotation(2, angles[0]) * axis_rotation(1, angles[1]) * axis_rotation(0, angles[2]);
  }
  throw ConfigError("unknown Euler convention");
}

/// Inverse of euler_to_rotation. At gimbal lock the last angle is set to zero.
inline Vec3 rotation_to_euler(const Mat3& r, EulerConvention convention) {
  constexpr double kLock = 1.0 - 1e-12;
  switch (convention) {
    case EulerConvention::XYZ: {
      const double sb = std::clamp(r(0, 2), -1.0, 1.0);
      const double b = std::asin(sb);
      if (std::abs(sb) < kLock) {
        return {std::atan2(-r(1, 2), r(2, 2)), b, std::atan2(-r(0, 1), r(0, 0))};
      }
      return {std::atan2(r(2, 1), r(1, 1)), b, 0.0};
    }
    case EulerConvention::ZYX: {
      const double sb = std::clamp(-r(2, 0), -1.0, 1.0);
      const double b = std::asin(sb);
      if (std::abs(sb) < kLock) {
        return {std::atan2(r(1, 0), r(0, 0)), b, std::atan2(r(2, 1), r(2, 2))};
      }
      return {std::atan2(-r(0, 1), r(1, 1)), b, 0.0};
    }
  }
  throw ConfigError("unknown Euler convention");
}

/// Unit quaternion (w, x, y, z) to rotation matrix. q and -q give the same matrix bit for bit.
inline Mat3 quaternion_to_rotation(const Vec4& q) {
  const double n = q.norm();
  if (!(n > 1e-12)) throw DomainError("quaternion norm is too small to normalize");
  const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

inline Mat3 hat(const Vec3& w) {
  Mat3 k;
  k << 0, -w.z(), w.y(),
       w.z(), 0, -w.x(),
       -w.y(), w.x(), 0;
  return k;
}

inline Vec3 vee(const Mat3& k) { return {k(2, 1), k(0, 2), k(1, 0)}; }

/// Rodrigues formula; second-order Taylor coefficients below 1e-6 rad.
inline Mat3 exp_so3(const Vec3& omega) {
  const double theta2 = omega.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a, b;
  if (theta < 1e-6) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = hat(omega);
  return Mat3::Identity() + a * k + b * (k * k);
}

/// Axis-angle vector of a rotation, with angle in [0, pi].
inline Vec3 log_so3(const Mat3& r) {
  const Vec3 skew(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double sin_theta = 0.5 * skew.norm();
  const double cos_theta = 0.5 * (r.trace() - 1.0);
  const double theta = std::atan2(sin_theta, cos_theta);

  if (theta < 1e-6) {
    // theta / (2 sin theta) ~ 1/2 (1 + theta^2 / 6)
    return 0.5 * (1.0 + theta * theta / 6.0) * skew;
  }
  if (theta < std::numbers::pi - 1e-3) {
    return (theta / (2.0 * std::sin(theta))) * skew;
  }
  // Near pi the skew part vanishes; recover the axis from the symmetric part,
  // which equals (1 - cos theta) a a^T off the identity.
  const Mat3 sym = 0.5 * (r + r.transpose()) - cos_theta * Mat3::Identity();
  int k = 0;
  sym.diagonal().maxCoeff(&k);
  Vec3 axis = sym.col(k) / std::sqrt(std::max(sym(k, k), 1e-300));
  axis.normalize();
  if (axis.dot(skew) < 0.0) axis = -axis;
  return theta * axis;
}

/// True when R^T R = I and det R = +1, both within tol.
inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  if (!r.allFinite()) return false;
  const double orth = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return orth <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace clay
