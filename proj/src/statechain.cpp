#include "televiz/statechain.hpp"

#include <algorithm>
#include <array>

namespace televiz {

Pose hmd_in_tracking(const Pose& base_in_tracking, const Pose& hmd_in_base) {
  return compose(base_in_tracking, hmd_in_base);
}

Pose zed_in_robot(const Pose& head_in_body, const Pose& zed_in_head) {
  return compose(head_in_body, zed_in_head);
}

Pose robot_body_from_odometry(const Pose& zed_in_world, const Pose& zed_in_robot) {
  return compose(zed_in_world, inverse(zed_in_robot));
}

Pose NeckModel::head_in_body(double yaw, double pitch) const {
  const Pose yaw_joint = Pose::from_rotation(rotation_z(yaw));
  const Pose pitch_joint = Pose::from_rotation(rotation_y(-pitch));
  return neck_in_body * yaw_joint * pitch_joint;
}

double NeckModel::clamp_yaw(double yaw) const {
  return std::clamp(yaw, -yaw_limit, yaw_limit);
}

double NeckModel::clamp_pitch(double pitch) const {
  return std::clamp(pitch, -pitch_limit, pitch_limit);
}

FrameGraph build_frame_graph(const MeasurementSet& meas, const VirtualAnchors& anchors) {
  using enum FrameId;
  FrameGraph g;
  g.set(Hmd, Tracking, meas.hmd_in_tracking, EdgeKind::Streamed);
  g.set(Zed, Robot, meas.zed_in_robot, EdgeKind::Streamed);
  g.set(Zed, World, meas.zed_in_world, EdgeKind::Streamed);
  // Measurements map one-to-one into the virtual space.
  g.set(VirtualHmd, VirtualTracking, meas.hmd_in_tracking, EdgeKind::Streamed);
  g.set(VirtualZed, VirtualRobot, meas.zed_in_robot, EdgeKind::Streamed);
  g.set(VirtualZed, VirtualWorld, meas.zed_in_world, EdgeKind::Streamed);
  g.set(VirtualTracking, VirtualRobot, anchors.tracking_in_robot_virtual);
  g.set(VirtualRobot, VirtualWorld, anchors.robot_in_world_virtual,
        anchors.mode == AnchorMode::MeshAnchored ? EdgeKind::Streamed
                                                 : EdgeKind::Static);
  g.set(Mesh, VirtualWorld, anchors.mesh_in_world_virtual);
  return g;
}

ViewState decoupled_view(const MeasurementSet& meas, const VirtualAnchors& anchors) {
  using enum FrameId;
  const FrameGraph g = build_frame_graph(meas, anchors);
  constexpr std::array zed_to_hmd{VirtualZed, VirtualRobot, VirtualTracking, VirtualHmd};
  constexpr std::array hmd_to_world{VirtualHmd, VirtualTracking, VirtualRobot,
                                    VirtualWorld};
  // Through the odometry edge rather than the virtual robot body.
  constexpr std::array mesh_to_hmd{Mesh,         VirtualWorld,    VirtualZed,
                                   VirtualRobot, VirtualTracking, VirtualHmd};
  return ViewState{
      .zed_in_hmd_virtual = g.compose_path(zed_to_hmd),
      .hmd_in_world_virtual = g.compose_path(hmd_to_world),
      .mesh_in_hmd_virtual = g.compose_path(mesh_to_hmd),
  };
}

VirtualAnchors update_anchors(const VirtualAnchors& anchors, const MeasurementSet& meas) {
  if (anchors.mode == AnchorMode::NoMesh) return anchors;
  VirtualAnchors out = anchors;
  out.robot_in_world_virtual = robot_body_from_odometry(meas.zed_in_world, meas.zed_in_robot);
  return out;
}

Pose zed_in_world_virtual(const MeasurementSet& meas, const VirtualAnchors& anchors) {
  return compose(anchors.robot_in_world_virtual, meas.zed_in_robot);
}

}  // namespace televiz
