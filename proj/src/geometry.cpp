#include "televiz/geometry.hpp"

#include <cmath>

namespace televiz {

Pose::Pose(const Quat& rotation, const Vec3& translation)
    : rotation_(rotation.normalized()), translation_(translation) {}

Pose Pose::from_translation(double x, double y, double z) {
  return {Quat::Identity(), Vec3(x, y, z)};
}

Pose Pose::from_translation(const Vec3& t) { return {Quat::Identity(), t}; }

Pose Pose::from_rotation(const Quat& q) { return {q, Vec3::Zero()}; }

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_.toRotationMatrix();
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Pose compose(const Pose& a, const Pose& b) {
  // Constructor renormalizes the product.
  return {a.rotation() * b.rotation(),
          a.rotation() * b.translation() + a.translation()};
}

Pose inverse(const Pose& p) {
  const Quat inv = p.rotation().conjugate();
  return {inv, -(inv * p.translation())};
}

Vec3 apply(const Pose& p, const Vec3& point) {
  return p.rotation() * point + p.translation();
}

Quat rotation_x(double radians) {
  return Quat(Eigen::AngleAxisd(radians, Vec3::UnitX()));
}

Quat rotation_y(double radians) {
  return Quat(Eigen::AngleAxisd(radians, Vec3::UnitY()));
}

Quat rotation_z(double radians) {
  return Quat(Eigen::AngleAxisd(radians, Vec3::UnitZ()));
}

Quat yaw_pitch(double yaw, double pitch) {
  // Rotating +x about +y by a positive angle points it downward, hence -pitch.
  return (rotation_z(yaw) * rotation_y(-pitch)).normalized();
}

double yaw_of(const Quat& q) {
  const Vec3 f = q * Vec3::UnitX();
  return std::atan2(f.y(), f.x());
}

double pitch_of(const Quat& q) {
  const Vec3 f = q * Vec3::UnitX();
  return std::atan2(f.z(), std::hypot(f.x(), f.y()));
}

double rotation_angle(const Quat& a, const Quat& b) {
  const Quat d = a.conjugate() * b;
  return 2.0 * std::atan2(d.vec().norm(), std::abs(d.w()));
}

double rotation_distance(const Pose& a, const Pose& b) {
  return rotation_angle(a.rotation(), b.rotation());
}

double translation_distance(const Pose& a, const Pose& b) {
  return (a.translation() - b.translation()).norm();
}

double forward_axis_angle(const Quat& a, const Quat& b) {
  const Vec3 fa = a * Vec3::UnitX();
  const Vec3 fb = b * Vec3::UnitX();
  return std::atan2(fa.cross(fb).norm(), fa.dot(fb));
}

}  // namespace televiz
