#pragma once

#include "televiz/calibration.hpp"
#include "televiz/netsim.hpp"
#include "televiz/scenario.hpp"
#include "televiz/smoothing.hpp"
#include "televiz/statechain.hpp"
#include "televiz/world.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <variant>
#include <vector>

namespace televiz {

namespace command {
struct HeadTarget {
  double yaw = 0.0;  // degrees
  double pitch = 0.0;
};
struct BaseVelocity {
  double v = 0.0;  // m/s
  double yaw_rate = 0.0;  // deg/s
};
struct Calibrate {};
struct SetMode {
  ViewMode mode = ViewMode::Decoupled;
};
struct Scan {
  bool start = true;
};
}  // namespace command

using Command = std::variant<command::HeadTarget, command::BaseVelocity, command::Calibrate,
                             command::SetMode, command::Scan>;

/// One tick of output. NaN marks a lag that could not be estimated yet.
struct MetricsRow {
  double time = 0.0;
  double operator_yaw_deg = 0.0;
  double operator_pitch_deg = 0.0;
  double robot_yaw_deg = 0.0;
  double robot_pitch_deg = 0.0;
  double lag_s = 0.0;
  double live_fraction = 0.0;
  double mesh_fraction = 0.0;
  double blank_fraction = 0.0;
  double calibration_residual = 0.0;
  double gap_deg = 0.0;
};

struct Snapshot {
  std::int64_t tick = 0;
  double time = 0.0;
  ViewMode mode = ViewMode::Decoupled;
  Pose operator_pose;  // HMD in tracking space
  double operator_yaw_deg = 0.0;
  double operator_pitch_deg = 0.0;
  Pose robot_pose;  // body in world, as last reported
  double robot_yaw_deg = 0.0;
  double robot_pitch_deg = 0.0;
  CoverageImage coverage;
  double lag_estimate = 0.0;
  double calibration_residual = 0.0;
  double gap_deg = 0.0;
  bool scanning = false;
};

/// Fixed-step operator/network/robot simulation. Not thread-safe; commands are
/// queued and take effect at the start of the next step().
class Engine {
 public:
  explicit Engine(ScenarioConfig config);

  void enqueue(const Command& c);
  const MetricsRow& step();

  std::int64_t tick() const { return tick_; }
  double time() const { return static_cast<double>(tick_) * period_; }
  bool done() const { return tick_ >= config_.tick_count(); }

  const ScenarioConfig& config() const { return config_; }
  ViewMode mode() const { return mode_; }
  const std::vector<MetricsRow>& rows() const { return rows_; }
  const MeshModel& mesh() const { return mesh_; }
  const PointCloudFrame& last_frame() const { return latest_.frame; }
  const VirtualAnchors& anchors() const { return anchors_; }
  const ViewState& view() const { return view_; }
  const MeasurementSet& measurement() const { return meas_; }
  const CoverageImage& coverage() const { return coverage_; }
  const std::optional<CalibrationResult>& last_calibration() const { return last_calibration_; }
  bool calibrated_last_step() const { return calibrated_last_step_; }

  const std::vector<double>& operator_yaw_trace() const { return operator_yaw_; }
  const std::vector<double>& robot_yaw_trace() const { return robot_yaw_; }

  /// State after the most recent step().
  Snapshot snapshot() const;

 private:
  struct CommandMsg {
    double yaw = 0.0;  // radians
    double pitch = 0.0;
    double v = 0.0;
    double yaw_rate = 0.0;  // rad/s
  };
  struct Feedback {
    Pose zed_in_robot;
    Pose zed_in_world;  // odometry estimate
    Pose body_in_world;
    PointCloudFrame frame;
    double neck_yaw = 0.0;
    double neck_pitch = 0.0;
    double time = 0.0;
  };

  void apply(const Command& c);
  void apply_script(double t);
  Pose operator_head(double t) const;
  void advance_robot(const CommandMsg& target);
  Feedback measure_robot(double t);
  double windowed_lag() const;

  ScenarioConfig config_;
  double period_;
  NeckModel neck_;
  Pose zed_extrinsic_;
  Pose base_in_tracking_;

  DelayedChannel<CommandMsg> command_channel_;
  DelayedChannel<Feedback> feedback_channel_;
  Rng odometry_rng_;

  // Robot side.
  CommandMsg robot_target_;
  double neck_yaw_ = 0.0;
  double neck_pitch_ = 0.0;
  double body_x_ = 0.0;
  double body_y_ = 0.0;
  double body_yaw_ = 0.0;

  // Operator side.
  std::int64_t tick_ = 0;
  std::size_t next_event_ = 0;
  std::vector<ScriptEvent> script_;
  std::deque<Command> pending_;
  std::optional<command::HeadTarget> head_override_;
  command::BaseVelocity base_command_;
  ViewMode mode_;
  bool scanning_ = false;
  bool calibration_requested_ = false;
  bool calibrated_last_step_ = false;
  std::optional<CalibrationResult> last_calibration_;
  Feedback latest_;
  MeasurementSet meas_;
  VirtualAnchors anchors_;
  FilterState filter_;
  bool filter_ready_ = false;
  ViewState view_;
  MeshModel mesh_;
  CoverageImage coverage_;
  double current_lag_;

  std::vector<double> operator_yaw_;
  std::vector<double> robot_yaw_;
  std::vector<MetricsRow> rows_;
};

}  // namespace televiz
