#pragma once

#include <span>
#include <vector>

#include "clay/rotation.hpp"
#include "clay/types.hpp"

namespace clay {

/// Rigid motion p -> R p + t with R a proper rotation.
class RigidTransform {
 public:
  RigidTransform() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

  RigidTransform(const Mat3& rotation, const Vec3& translation)
      : rotation_(rotation), translation_(translation) {
    if (!is_rotation(rotation_)) {
      throw DomainError("rotation matrix is not orthonormal with det +1 (tolerance 1e-9)");
    }
    if (!translation_.allFinite()) throw DomainError("non-finite translation");
  }

  static RigidTransform identity() { return {}; }
  static RigidTransform translation(const Vec3& t) { return {Mat3::Identity(), t}; }

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 apply_vector(const Vec3& v) const { return rotation_ * v; }

  RigidTransform inverse() const {
    RigidTransform out;
    out.rotation_ = rotation_.transpose();
    out.translation_ = -(out.rotation_ * translation_);
    return out;
  }

  /// (a * b)(p) = a(b(p)).
  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
    RigidTransform out;
    out.rotation_ = a.rotation_ * b.rotation_;
    out.translation_ = a.rotation_ * b.translation_ + a.translation_;
    return out;
  }

  Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation_;
    m.topRightCorner<3, 1>() = translation_;
    return m;
  }

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

/// Applies T to every point; normals are rotated, colors copied.
inline PointCloud transform_points(const RigidTransform& t, const PointCloud& pts) {
  PointCloud out = pts;
  for (auto& p : out.points) p = t.apply(p);
  for (auto& n : out.normals) n = t.apply_vector(n);
  return out;
}

inline std::vector<Vec3> transform_points(const RigidTransform& t, std::span<const Vec3> pts) {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(t.apply(p));
  return out;
}

/// General 4x4 homogeneous map (affine or projective) followed by the perspective divide.
/// Points mapped to w = 0 come back as infinities.
inline std::vector<Vec3> apply_homogeneous(const Mat4& m, std::span<const Vec3> pts) {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    const Vec4 h = m * p.homogeneous();
    out.push_back(h.head<3>() / h[3]);
  }
  return out;
}

}  // namespace clay
