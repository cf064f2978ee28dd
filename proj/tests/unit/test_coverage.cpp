#include "oracle/billboard.hpp"
#include "oracle/spherical.hpp"
#include "televiz/scenario.hpp"
#include "televiz/world.hpp"

#include <doctest.h>

using namespace televiz;

namespace {

// Big empty room: everything in range from its center, no occluders.
SceneModel open_room() {
  SceneModel s;
  s.boxes.push_back({{-3, -3, -3}, {3, 3, 3}, {180, 170, 160}});
  return s;
}

double sum(const CoverageReport& r) { return r.live_fraction + r.mesh_fraction + r.blank_fraction; }

}  // namespace

TEST_CASE("aligned narrower HMD sees only live cloud") {
  const SceneModel scene = open_room();
  const CameraModel cam{90, 60, 10, 32, 24};
  const CameraModel hmd{80, 50, 10, 32, 32};
  const Pose pose(yaw_pitch(0.4, 0.1), Vec3(0.2, 0.1, -0.3));
  const PointCloudFrame frame = capture_pointcloud(scene, cam, pose);
  const CoverageReport r = classify_coverage(scene, MeshModel(), hmd, pose, frame);
  CHECK(r.live_fraction == 1.0);
  CHECK(r.blank_fraction == 0.0);
}

TEST_CASE("HMD turned around with nothing scanned is all blank") {
  const SceneModel scene = open_room();
  const CameraModel cam{90, 60, 10, 32, 24};
  const PointCloudFrame frame = capture_pointcloud(scene, cam, Pose::identity());
  const Pose back = Pose::from_rotation(rotation_z(std::numbers::pi));
  const CoverageReport r = classify_coverage(scene, MeshModel(), CameraModel{107, 98, 10, 32, 32}, back, frame);
  CHECK(r.blank_fraction == 1.0);
}

TEST_CASE("yawed past the frustum edge: live share matches the exact overlap") {
  const SceneModel scene = open_room();
  const CameraModel cam{90, 60, 10, 16, 12};
  const CameraModel hmd{107, 98, 10, 128, 128};
  const MeshModel full = prescanned_mesh(scene, 0.05, 0.35);
  const PointCloudFrame frame = capture_pointcloud(scene, cam, Pose::identity());
  const auto cam_poly = oracle::frustum_polygon(oracle::identity(), 90, 60);
  for (double yaw_deg : {0.0, 20.0, 45.0, 70.0, 95.0}) {
    for (double pitch_deg : {0.0, 25.0}) {
      const Pose hmd_pose = Pose::from_rotation(yaw_pitch(deg2rad(yaw_deg), deg2rad(pitch_deg)));
      const CoverageReport r = classify_coverage(scene, full, hmd, hmd_pose, frame);
      CHECK(r.blank_fraction == 0.0);
      CHECK(r.live_fraction + r.mesh_fraction == doctest::Approx(1.0).epsilon(1e-12));
      const auto hmd_poly = oracle::frustum_polygon(
          oracle::mul(oracle::rot_z(deg2rad(yaw_deg)), oracle::rot_y(-deg2rad(pitch_deg))), 107, 98);
      const double overlap = oracle::solid_angle(oracle::intersect(hmd_poly, cam_poly)) /
                             oracle::solid_angle(hmd_poly);
      CHECK(std::abs(r.live_fraction - overlap) < 0.02);
    }
  }
}

TEST_CASE("partition holds on random poses") {
  const SceneModel scene = lab_scene();
  const CameraModel cam{90, 60, 10, 24, 16};
  const CameraModel hmd{107, 98, 10, 24, 24};
  Rng rng(71);
  MeshModel mesh;
  for (int i = 0; i < 40; ++i) {
    const Pose cpose(yaw_pitch(rng.uniform(-3, 3), rng.uniform(-0.6, 0.6)),
                     Vec3(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.5, 2.5)));
    const PointCloudFrame frame = capture_pointcloud(scene, cam, cpose);
    if (i % 3 == 0) mesh = scan_mesh(std::move(mesh), scene, frame);
    const Pose hpose(yaw_pitch(rng.uniform(-3, 3), rng.uniform(-0.6, 0.6)), cpose.translation());
    for (bool head_locked : {false, true}) {
      for (bool use_mesh : {false, true}) {
        const CoverageImage img =
            classify_coverage_image(scene, mesh, hmd, hpose, frame, {head_locked, use_mesh});
        CHECK(std::abs(sum(img.report) - 1.0) < 1e-12);
        CHECK(img.labels.size() == static_cast<std::size_t>(hmd.cols * hmd.rows));
        if (!use_mesh) CHECK(img.report.mesh_fraction == 0.0);
      }
    }
  }
}

namespace {

// One ray at a time through the public queries, with no shortcuts.
CoverageLabel reference_label(const SceneModel& scene, const MeshModel& mesh,
                              const CameraModel& hmd, const Pose& hmd_pose,
                              const PointCloudFrame& frame, const CoverageOptions& options,
                              int col, int row) {
  const Vec3 d = hmd.ray_direction(col, row);
  const auto hit = cast_ray(scene, hmd_pose.translation(), hmd_pose.rotation() * d, hmd.max_range);
  if (!hit) return CoverageLabel::Blank;
  const bool in_view = !options.head_locked || frame.camera.contains_direction(d);
  const Vec3 cam_origin = frame.capture_pose.translation();
  const Vec3 pc = apply(inverse(frame.capture_pose), hit->point);
  const double dist = (hit->point - cam_origin).norm();
  if (in_view && frame.camera.contains_direction(pc) && dist <= frame.camera.max_range) {
    const double limit = dist - 1e-6 * std::max(1.0, dist);
    const auto blocker = cast_ray(scene, cam_origin, (hit->point - cam_origin) / dist, limit);
    if (!blocker || !(blocker->distance < limit)) return CoverageLabel::Live;
  }
  if (options.use_mesh && mesh.contains(cell_of(scene, hit->surface, hit->point, mesh.cell_size()))) {
    return CoverageLabel::Mesh;
  }
  return CoverageLabel::Blank;
}

}  // namespace

TEST_CASE("labels match a ray-by-ray reference") {
  const SceneModel scene = lab_scene();
  const CameraModel cam{90, 60, 10, 32, 24};
  const CameraModel hmd{107, 98, 10, 20, 20};
  Rng rng(73);
  MeshModel mesh;
  for (int i = 0; i < 30; ++i) {
    const Pose cpose(yaw_pitch(rng.uniform(-3, 3), rng.uniform(-0.5, 0.5)),
                     Vec3(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(0.8, 2.0)));
    const PointCloudFrame frame = capture_pointcloud(scene, cam, cpose);
    if (i % 2 == 0) mesh = scan_mesh(std::move(mesh), scene, frame);
    // Eye near the camera (small and large offsets) and turned away from it.
    const double offset = i % 3 == 0 ? 0.0 : rng.uniform(0.0, i % 3 == 1 ? 0.1 : 1.0);
    const Vec3 eye = cpose.translation() + offset * Vec3(rng.normal(), rng.normal(), rng.normal()).normalized();
    const Pose hpose(yaw_pitch(yaw_of(cpose.rotation()) + rng.uniform(-1.5, 1.5), rng.uniform(-0.5, 0.5)), eye);
    for (bool head_locked : {false, true}) {
      for (bool use_mesh : {false, true}) {
        const CoverageOptions options{head_locked, use_mesh};
        const CoverageImage img = classify_coverage_image(scene, mesh, hmd, hpose, frame, options);
        int mismatches = 0;
        for (int row = 0; row < hmd.rows; ++row) {
          for (int col = 0; col < hmd.cols; ++col) {
            const CoverageLabel want =
                reference_label(scene, mesh, hmd, hpose, frame, options, col, row);
            if (img.labels[static_cast<std::size_t>(row * hmd.cols + col)] != want) ++mismatches;
          }
        }
        CHECK(mismatches == 0);
      }
    }
  }
}

TEST_CASE("head-locked display never shows more live cloud") {
  const SceneModel scene = lab_scene();
  const CameraModel cam{90, 60, 10, 24, 16};
  const CameraModel hmd{107, 98, 10, 32, 32};
  Rng rng(72);
  for (int i = 0; i < 30; ++i) {
    const Pose cpose(yaw_pitch(rng.uniform(-3, 3), 0.0), Vec3(0, 0, 1.6));
    const Pose hpose(yaw_pitch(yaw_of(cpose.rotation()) + rng.uniform(-0.8, 0.8), 0.0),
                     cpose.translation());
    const PointCloudFrame frame = capture_pointcloud(scene, cam, cpose);
    const auto locked = classify_coverage(scene, MeshModel(), hmd, hpose, frame, {true, false});
    const auto free = classify_coverage(scene, MeshModel(), hmd, hpose, frame, {false, false});
    CHECK(locked.live_fraction <= free.live_fraction + 1e-15);
  }
}

TEST_CASE("image colors follow the labels") {
  const SceneModel scene = lab_scene();
  const CameraModel cam{90, 60, 10, 24, 16};
  const CameraModel hmd{107, 98, 10, 48, 48};
  const Pose pose(rotation_z(0.0), Vec3(0, 0, 1.6));
  MeshModel mesh;
  mesh = scan_mesh(std::move(mesh), scene,
                   capture_pointcloud(scene, cam, Pose(rotation_z(deg2rad(50)), pose.translation())));
  const PointCloudFrame frame = capture_pointcloud(scene, cam, pose);
  const Pose hmd_pose(rotation_z(deg2rad(40)), pose.translation());
  const CoverageImage img = classify_coverage_image(scene, mesh, hmd, hmd_pose, frame);
  int counts[3] = {0, 0, 0};
  for (std::size_t i = 0; i < img.labels.size(); ++i) {
    const int row = static_cast<int>(i) / hmd.cols;
    const int col = static_cast<int>(i) % hmd.cols;
    const auto hit = cast_ray(scene, hmd_pose.translation(),
                              hmd_pose.rotation() * hmd.ray_direction(col, row), hmd.max_range);
    switch (img.labels[i]) {
      case CoverageLabel::Live:
        ++counts[0];
        CHECK(img.colors[i] == hit->color);
        break;
      case CoverageLabel::Mesh:
        ++counts[1];
        CHECK(img.colors[i] == mesh.tinted(hit->color));
        CHECK(img.colors[i] != hit->color);
        break;
      case CoverageLabel::Blank:
        ++counts[2];
        CHECK(img.colors[i] == kBlankColor);
        break;
    }
  }
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
}

TEST_CASE("mesh share grows monotonically for a fixed HMD pose") {
  const SceneModel scene = lab_scene();
  // Ray spacing below the cell size so a sweep leaves few holes.
  const CameraModel cam{90, 60, 10, 192, 128};
  const CameraModel hmd{107, 98, 10, 32, 32};
  const Pose hmd_pose(rotation_z(deg2rad(120)), Vec3(0, 0, 1.6));
  // Live cloud looks the other way so only the mesh can cover the HMD view.
  const PointCloudFrame away = capture_pointcloud(scene, cam, Pose(rotation_z(deg2rad(-60)), Vec3(0, 0, 1.6)));
  MeshModel mesh;
  double mesh_prev = 0.0;
  double blank_prev = 1.0;
  for (int k = 0; k <= 24; ++k) {
    const Pose scan_pose(yaw_pitch(deg2rad(15.0 * k), deg2rad(k % 2 == 0 ? -10 : 10)), Vec3(0, 0, 1.6));
    mesh = scan_mesh(std::move(mesh), scene, capture_pointcloud(scene, cam, scan_pose));
    const CoverageReport r = classify_coverage(scene, mesh, hmd, hmd_pose, away);
    CHECK(r.mesh_fraction >= mesh_prev);
    CHECK(r.blank_fraction <= blank_prev);
    mesh_prev = r.mesh_fraction;
    blank_prev = r.blank_fraction;
  }
  CHECK(mesh_prev > 0.5);
}

TEST_CASE("billboard error matches the projective oracle on random configurations") {
  Rng rng(81);
  int checked = 0;
  while (checked < 100) {
    const auto cam = oracle::random_pose(rng, 2.0);
    const auto hmd_rot = oracle::random_pose(rng, 0.3);
    const Vec3 offset(hmd_rot.tx, hmd_rot.ty, hmd_rot.tz);
    const Vec3 local(rng.uniform(0.3, 5.0), rng.uniform(-2, 2), rng.uniform(-2, 2));
    const Pose cpose = cam.pose();
    const Vec3 p = apply(cpose, local);
    const Pose hpose(hmd_rot.pose().rotation(), cpose.translation() + offset);
    const double depth = rng.uniform(0.5, 3.0);
    const double got = billboard_distortion(p, cpose, hpose, depth);
    auto cm = cam.matrix();
    auto hm = oracle::translation(hpose.translation().x(), hpose.translation().y(),
                                  hpose.translation().z());
    const double want = oracle::billboard_error({p.x(), p.y(), p.z()}, cm, hm, depth);
    CHECK(std::abs(got - want) < 1e-9);
    ++checked;
  }
}
