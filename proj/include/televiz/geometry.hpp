#pragma once

#include <Eigen/Geometry>

#include <numbers>

namespace televiz {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

// All frames are right-handed, z-up, x-forward, y-left.

/// Rigid transform: the pose of a child frame expressed in a parent frame.
/// `compose(pose_of_x_in_y, pose_of_c_in_x)` yields the pose of c in y.
class Pose {
 public:
  Pose() = default;
  Pose(const Quat& rotation, const Vec3& translation);

  static Pose identity() { return {}; }
  static Pose from_translation(double x, double y, double z);
  static Pose from_translation(const Vec3& t);
  static Pose from_rotation(const Quat& q);

  const Quat& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  /// Homogeneous 4x4 form, for export and debugging.
  Eigen::Matrix4d matrix() const;

  friend bool operator==(const Pose& a, const Pose& b) {
    return a.rotation_.coeffs() == b.rotation_.coeffs() &&
           a.translation_ == b.translation_;
  }

 private:
  Quat rotation_ = Quat::Identity();
  Vec3 translation_ = Vec3::Zero();
};

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& p);
Vec3 apply(const Pose& p, const Vec3& point);

inline Pose operator*(const Pose& a, const Pose& b) { return compose(a, b); }

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

Quat rotation_x(double radians);
Quat rotation_y(double radians);
Quat rotation_z(double radians);

/// Head-style orientation: yaw about +z, then pitch about the yawed +y axis.
/// Positive pitch tilts the forward axis upward.
Quat yaw_pitch(double yaw, double pitch);

/// Yaw and pitch of the forward (+x) axis, inverse of `yaw_pitch` for zero roll.
double yaw_of(const Quat& q);
double pitch_of(const Quat& q);

/// Rotation angle of a^-1 b in [0, pi].
double rotation_angle(const Quat& a, const Quat& b);
double rotation_distance(const Pose& a, const Pose& b);
double translation_distance(const Pose& a, const Pose& b);

/// Angle between the forward axes of two orientations.
double forward_axis_angle(const Quat& a, const Quat& b);

}  // namespace televiz
