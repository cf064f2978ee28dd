#pragma once

#include "televiz/statechain.hpp"

#include <cstdint>

namespace televiz {

/// Outcome of one viewpoint calibration.
struct CalibrationResult {
  Pose tracking_in_robot_virtual;  // the relocated tracking frame T'' in R'
  std::int64_t applied_at = 0;     // tick index
  double residual = 0.0;           // rotation angle + translation norm
};

/// Pose distance between the virtual HMD and the virtual ZED, in radians plus
/// meters. Zero means the operator looks exactly through the camera.
struct ViewResidual {
  double angle = 0.0;
  double translation = 0.0;
  double total() const { return angle + translation; }
};

/// Moves the virtual tracking space so the virtual HMD lands on the virtual
/// ZED, leaving the measured HMD-in-tracking pose untouched.
CalibrationResult calibrate(const Pose& zed_in_robot, const Pose& hmd_in_tracking,
                            std::int64_t tick = 0);

VirtualAnchors apply_calibration(const VirtualAnchors& anchors,
                                 const CalibrationResult& result);

/// Distance between H' and Z' in the virtual world for the given state.
ViewResidual view_residual(const MeasurementSet& meas, const VirtualAnchors& anchors);

}  // namespace televiz
