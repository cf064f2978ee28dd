#pragma once

#include "televiz/frame_graph.hpp"
#include "televiz/geometry.hpp"

namespace televiz {

/// The three streamed measurements: HMD in tracking space, ZED in robot body,
/// ZED in world (visual-inertial odometry).
struct MeasurementSet {
  Pose hmd_in_tracking;
  Pose zed_in_robot;
  Pose zed_in_world;
  double timestamp = 0.0;
};

enum class AnchorMode { NoMesh, MeshAnchored };

/// Where the virtual tracking space, virtual robot body and mesh sit in the
/// virtual world.
struct VirtualAnchors {
  Pose tracking_in_robot_virtual;  // T' in R'
  Pose robot_in_world_virtual;     // R' in W'
  Pose mesh_in_world_virtual;      // S in W'
  AnchorMode mode = AnchorMode::NoMesh;
};

struct ViewState {
  Pose zed_in_hmd_virtual;    // Z' in H'
  Pose hmd_in_world_virtual;  // H' in W'
  Pose mesh_in_hmd_virtual;   // S in H'
};

/// HMD pose in tracking space from the room-setup base station pose and the
/// live base-station measurement.
Pose hmd_in_tracking(const Pose& base_in_tracking, const Pose& hmd_in_base);

/// ZED pose in the robot body from neck forward kinematics and the camera
/// extrinsic.
Pose zed_in_robot(const Pose& head_in_body, const Pose& zed_in_head);

/// Body pose in world recovered from odometry: zed_in_world * zed_in_robot^-1.
Pose robot_body_from_odometry(const Pose& zed_in_world, const Pose& zed_in_robot);

/// Two revolute joints, yaw about body z then pitch about the yawed y axis.
struct NeckModel {
  Pose neck_in_body = Pose::from_translation(0.0, 0.0, 1.5);
  double yaw_limit = deg2rad(55.0);    // symmetric, radians
  double pitch_limit = deg2rad(30.0);  // symmetric, radians

  Pose head_in_body(double yaw, double pitch) const;
  double clamp_yaw(double yaw) const;
  double clamp_pitch(double pitch) const;
};

/// Registers the measurements, their virtual counterparts and the anchors.
FrameGraph build_frame_graph(const MeasurementSet& meas, const VirtualAnchors& anchors);

/// Decoupled virtual-HMD and virtual-ZED poses plus the mesh-in-HMD chain.
ViewState decoupled_view(const MeasurementSet& meas, const VirtualAnchors& anchors);

/// In MeshAnchored mode, re-anchors the virtual robot body on odometry;
/// NoMesh anchors are returned unchanged.
VirtualAnchors update_anchors(const VirtualAnchors& anchors, const MeasurementSet& meas);

/// Z' in W' as rendered: the virtual robot body carrying the ZED.
Pose zed_in_world_virtual(const MeasurementSet& meas, const VirtualAnchors& anchors);

}  // namespace televiz
