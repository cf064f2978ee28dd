#include "televiz/calibration.hpp"

namespace televiz {

CalibrationResult calibrate(const Pose& zed_in_robot, const Pose& hmd_in_tracking,
                            std::int64_t tick) {
  // T'' in R' = (Z in R) * (T in H): the tracking frame hangs off the ZED
  // exactly as it hangs off the HMD.
  CalibrationResult result;
  result.tracking_in_robot_virtual = compose(zed_in_robot, inverse(hmd_in_tracking));
  result.applied_at = tick;
  // H'' and Z' share the virtual robot body, so compare them there.
  const Pose hmd_in_robot = compose(result.tracking_in_robot_virtual, hmd_in_tracking);
  result.residual = rotation_distance(hmd_in_robot, zed_in_robot) +
                    translation_distance(hmd_in_robot, zed_in_robot);
  return result;
}

VirtualAnchors apply_calibration(const VirtualAnchors& anchors,
                                 const CalibrationResult& result) {
  VirtualAnchors out = anchors;
  out.tracking_in_robot_virtual = result.tracking_in_robot_virtual;
  return out;
}

ViewResidual view_residual(const MeasurementSet& meas, const VirtualAnchors& anchors) {
  const Pose hmd_in_world = anchors.robot_in_world_virtual *
                            anchors.tracking_in_robot_virtual * meas.hmd_in_tracking;
  const Pose zed_in_world = zed_in_world_virtual(meas, anchors);
  return {rotation_distance(hmd_in_world, zed_in_world),
          translation_distance(hmd_in_world, zed_in_world)};
}

}  // namespace televiz
