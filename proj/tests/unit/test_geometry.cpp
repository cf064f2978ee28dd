#include "oracle/homogeneous.hpp"
#include "televiz/geometry.hpp"

#include <doctest.h>

using namespace televiz;

TEST_CASE("pose renormalizes its rotation") {
  const Pose p(Quat(2.0, 0.0, 0.0, 0.0), Vec3(1, 2, 3));
  CHECK(p.rotation().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.rotation().w() == doctest::Approx(1.0));
}

TEST_CASE("compose and inverse match the matrix oracle") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto a = oracle::random_pose(rng);
    const auto b = oracle::random_pose(rng);
    CHECK(oracle::max_abs_diff(oracle::mul(a.matrix(), b.matrix()), a.pose() * b.pose()) < 1e-12);
    CHECK(oracle::max_abs_diff(oracle::rigid_inverse(a.matrix()), inverse(a.pose())) < 1e-12);
  }
}

TEST_CASE("matrix() agrees with the longhand expansion") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto a = oracle::random_pose(rng);
    const Eigen::Matrix4d m = a.pose().matrix();
    const auto o = a.matrix();
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) CHECK(m(r, c) == doctest::Approx(o[r][c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("composition is associative") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Pose a = oracle::random_pose(rng).pose();
    const Pose b = oracle::random_pose(rng).pose();
    const Pose c = oracle::random_pose(rng).pose();
    const Pose l = (a * b) * c;
    const Pose r = a * (b * c);
    CHECK(rotation_distance(l, r) < 1e-12);
    CHECK(translation_distance(l, r) < 1e-12);
  }
}

TEST_CASE("inverse round trip") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Pose a = oracle::random_pose(rng).pose();
    const Pose id = a * inverse(a);
    CHECK(rotation_distance(id, Pose::identity()) < 1e-12);
    CHECK(id.translation().norm() < 1e-12);
    const Vec3 p(rng.normal(), rng.normal(), rng.normal());
    CHECK((apply(inverse(a), apply(a, p)) - p).norm() < 1e-12);
  }
}

TEST_CASE("long chains do not drift off the rotation manifold") {
  const Pose step(rotation_z(1e-3) * rotation_x(2e-3), Vec3(1e-3, 0, 0));
  Pose acc;
  for (int i = 0; i < 100000; ++i) acc = acc * step;
  CHECK(std::abs(acc.rotation().norm() - 1.0) < 1e-12);
}

TEST_CASE("yaw and pitch") {
  SUBCASE("positive yaw turns left, positive pitch looks up") {
    const Quat q = yaw_pitch(deg2rad(30), deg2rad(20));
    const Vec3 fwd = q * Vec3::UnitX();
    CHECK(fwd.y() > 0.0);
    CHECK(fwd.z() > 0.0);
    CHECK(rad2deg(yaw_of(q)) == doctest::Approx(30.0));
    CHECK(rad2deg(pitch_of(q)) == doctest::Approx(20.0));
  }
  SUBCASE("matches rotation about z then the yawed y axis") {
    const auto m = oracle::mul(oracle::rot_z(0.4), oracle::rot_y(-0.3));
    CHECK(oracle::max_abs_diff(m, Pose::from_rotation(yaw_pitch(0.4, 0.3))) < 1e-14);
  }
}

TEST_CASE("rotation distances") {
  CHECK(rotation_angle(Quat::Identity(), rotation_z(0.5)) == doctest::Approx(0.5));
  // q and -q are the same rotation.
  const Quat q = rotation_x(0.3);
  const Quat neg(-q.w(), -q.x(), -q.y(), -q.z());
  CHECK(rotation_angle(q, neg) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rotation_angle(Quat::Identity(), rotation_y(std::numbers::pi)) ==
        doctest::Approx(std::numbers::pi));
  CHECK(rad2deg(forward_axis_angle(Quat::Identity(), rotation_z(deg2rad(20)))) ==
        doctest::Approx(20.0));
  // Roll leaves the forward axis alone.
  CHECK(forward_axis_angle(Quat::Identity(), rotation_x(1.0)) == doctest::Approx(0.0));
}
