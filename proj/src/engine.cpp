#include "televiz/engine.hpp"

#include "televiz/lag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace televiz {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ChannelConfig channel_config(const NetworkConfig& net, double delay, bool unstable,
                             std::uint64_t seed) {
  ChannelConfig c;
  c.base_delay = delay;
  c.jitter_stddev = net.jitter_stddev_s;
  if (unstable) c.instability = net.instability;
  c.seed = seed;
  return c;
}

bool unstable_on(const NetworkConfig& net, InstabilityChannel which) {
  return net.instability &&
         (net.instability_channel == which || net.instability_channel == InstabilityChannel::Both);
}

MeshModel initial_mesh(const ScenarioConfig& c) {
  if (c.mesh.prescan == Prescan::Full) {
    return prescanned_mesh(c.scene, c.mesh.cell_size_m, c.mesh.tint_strength);
  }
  return MeshModel(c.mesh.cell_size_m, c.mesh.tint_strength);
}

double servo_step(double current, double target, double dt, double time_constant,
                  double max_velocity) {
  double step = target - current;
  if (time_constant > 0.0) step *= 1.0 - std::exp(-dt / time_constant);
  if (max_velocity > 0.0) step = std::clamp(step, -max_velocity * dt, max_velocity * dt);
  return current + step;
}

}  // namespace

Engine::Engine(ScenarioConfig config)
    : config_(std::move(config)),
      period_(config_.period()),
      zed_extrinsic_(Pose::from_translation(config_.neck.zed_offset)),
      base_in_tracking_(rotation_z(deg2rad(config_.operator_.base_station_yaw_deg)),
                        config_.operator_.base_station),
      command_channel_(channel_config(config_.network, config_.network.command_delay_s,
                                      unstable_on(config_.network, InstabilityChannel::Command),
                                      derive_seed(config_.seed, 1))),
      feedback_channel_(channel_config(config_.network, config_.network.feedback_delay_s,
                                       unstable_on(config_.network, InstabilityChannel::Feedback),
                                       derive_seed(config_.seed, 2))),
      odometry_rng_(derive_seed(config_.seed, 3)),
      script_(config_.events),
      mode_(config_.mode),
      mesh_(initial_mesh(config_)),
      current_lag_(kNaN) {
  validate(config_);
  neck_.neck_in_body = Pose::from_translation(config_.neck.neck_offset);
  neck_.yaw_limit = deg2rad(config_.neck.yaw_limit_deg);
  neck_.pitch_limit = deg2rad(config_.neck.pitch_limit_deg);
  std::stable_sort(script_.begin(), script_.end(),
                   [](const ScriptEvent& a, const ScriptEvent& b) { return a.t < b.t; });
  // The operator station starts out knowing the robot's resting state.
  latest_ = measure_robot(0.0);
  latest_.frame.points.clear();
  const std::size_t n = static_cast<std::size_t>(std::max<std::int64_t>(0, config_.tick_count()));
  rows_.reserve(n);
  operator_yaw_.reserve(n);
  robot_yaw_.reserve(n);
}

void Engine::enqueue(const Command& c) { pending_.push_back(c); }

void Engine::apply(const Command& c) {
  std::visit(Overloaded{
                 [this](const command::HeadTarget& h) { head_override_ = h; },
                 [this](const command::BaseVelocity& b) { base_command_ = b; },
                 [this](const command::Calibrate&) { calibration_requested_ = true; },
                 [this](const command::SetMode& m) { mode_ = m.mode; },
                 [this](const command::Scan& s) { scanning_ = s.start; },
             },
             c);
}

void Engine::apply_script(double t) {
  while (next_event_ < script_.size() && script_[next_event_].t <= t + kDeliveryEpsilon) {
    const ScriptEvent& e = script_[next_event_++];
    switch (e.type) {
      case EventType::Calibrate:
        apply(command::Calibrate{});
        break;
      case EventType::ScanStart:
        apply(command::Scan{true});
        break;
      case EventType::ScanStop:
        apply(command::Scan{false});
        break;
      case EventType::BaseVelocity:
        apply(command::BaseVelocity{e.linear_velocity, e.yaw_rate_deg_s});
        break;
      case EventType::SetMode:
        apply(command::SetMode{e.mode});
        break;
    }
  }
}

Pose Engine::operator_head(double t) const {
  const auto& kfs = config_.operator_.keyframes;
  double yaw = 0.0;
  double pitch = 0.0;
  Vec3 offset = Vec3::Zero();
  if (!kfs.empty()) {
    if (t <= kfs.front().t) {
      yaw = kfs.front().yaw_deg;
      pitch = kfs.front().pitch_deg;
      offset = kfs.front().offset;
    } else if (t >= kfs.back().t) {
      yaw = kfs.back().yaw_deg;
      pitch = kfs.back().pitch_deg;
      offset = kfs.back().offset;
    } else {
      const auto hi = std::upper_bound(kfs.begin(), kfs.end(), t,
                                       [](double v, const HeadKeyframe& k) { return v < k.t; });
      const auto lo = hi - 1;
      const double span = hi->t - lo->t;
      const double s = span > 0.0 ? (t - lo->t) / span : 1.0;
      yaw = lo->yaw_deg + s * (hi->yaw_deg - lo->yaw_deg);
      pitch = lo->pitch_deg + s * (hi->pitch_deg - lo->pitch_deg);
      offset = lo->offset + s * (hi->offset - lo->offset);
    }
  }
  if (const auto& sw = config_.operator_.sweep;
      sw && t >= sw->start_s && t < sw->start_s + sw->duration_s) {
    yaw = sw->center_deg +
          sw->amplitude_deg * std::sin(2.0 * std::numbers::pi * (t - sw->start_s) / sw->period_s);
  }
  if (head_override_) {
    yaw = head_override_->yaw;
    pitch = head_override_->pitch;
  }
  return Pose(yaw_pitch(deg2rad(yaw), deg2rad(pitch)), config_.operator_.head_position + offset);
}

void Engine::advance_robot(const CommandMsg& target) {
  const double tau = config_.neck.time_constant_s;
  const double vmax = deg2rad(config_.neck.max_velocity_deg_s);
  neck_yaw_ = servo_step(neck_yaw_, neck_.clamp_yaw(target.yaw), period_, tau, vmax);
  neck_pitch_ = servo_step(neck_pitch_, neck_.clamp_pitch(target.pitch), period_, tau, vmax);
  body_yaw_ += target.yaw_rate * period_;
  body_x_ += target.v * std::cos(body_yaw_) * period_;
  body_y_ += target.v * std::sin(body_yaw_) * period_;
}

Engine::Feedback Engine::measure_robot(double t) {
  Feedback f;
  f.zed_in_robot = zed_in_robot(neck_.head_in_body(neck_yaw_, neck_pitch_), zed_extrinsic_);
  f.body_in_world = Pose(rotation_z(body_yaw_), Vec3(body_x_, body_y_, 0.0));
  const Pose truth = f.body_in_world * f.zed_in_robot;
  f.zed_in_world = truth;
  const OdometryNoise& noise = config_.odometry;
  if (noise.translation_stddev_m > 0.0 || noise.rotation_stddev_deg > 0.0) {
    const double ts = noise.translation_stddev_m;
    const double rs = deg2rad(noise.rotation_stddev_deg);
    const Vec3 dt(odometry_rng_.normal(0.0, ts), odometry_rng_.normal(0.0, ts),
                  odometry_rng_.normal(0.0, ts));
    const Vec3 dr(odometry_rng_.normal(0.0, rs), odometry_rng_.normal(0.0, rs),
                  odometry_rng_.normal(0.0, rs));
    const double angle = dr.norm();
    const Quat q = angle > 0.0 ? Quat(Eigen::AngleAxisd(angle, dr / angle)) : Quat::Identity();
    f.zed_in_world = Pose(truth.rotation() * q, truth.translation() + dt);
  }
  if (scanning_) {
    f.frame = capture_pointcloud(config_.scene, config_.camera, truth, t);
  } else {
    f.frame.capture_pose = truth;
    f.frame.camera = config_.camera;
    f.frame.timestamp = t;
  }
  f.neck_yaw = neck_yaw_;
  f.neck_pitch = neck_pitch_;
  f.time = t;
  return f;
}

double Engine::windowed_lag() const {
  const auto window = static_cast<std::size_t>(std::llround(config_.metrics.lag_window_s / period_));
  const auto max_lag = static_cast<int>(std::llround(config_.metrics.lag_max_s / period_));
  const std::size_t n = robot_yaw_.size();
  if (n < window) return kNaN;
  try {
    const int k = estimate_lag_samples(operator_yaw_, robot_yaw_, 0, max_lag,
                                       n - window + static_cast<std::size_t>(max_lag), n);
    return k * period_;
  } catch (const DegenerateSignal&) {
    return kNaN;
  }
}

const MetricsRow& Engine::step() {
  const double t = time();
  calibrated_last_step_ = false;
  apply_script(t);
  while (!pending_.empty()) {
    apply(pending_.front());
    pending_.pop_front();
  }

  // Operator head measurement, sent to the robot as a head command.
  const Pose head = operator_head(t);
  const Pose hmd = hmd_in_tracking(base_in_tracking_, inverse(base_in_tracking_) * head);
  const CommandMsg msg{yaw_of(hmd.rotation()), pitch_of(hmd.rotation()), base_command_.v,
                       deg2rad(base_command_.yaw_rate)};
  command_channel_.send(msg, t);

  // Robot.
  for (CommandMsg& m : command_channel_.poll(t)) robot_target_ = m;
  advance_robot(robot_target_);
  feedback_channel_.send(measure_robot(t), t);

  // Operator station: newest delivered robot state, mesh scanning.
  for (Feedback& f : feedback_channel_.poll(t)) {
    if (!f.frame.points.empty()) mesh_ = scan_mesh(std::move(mesh_), config_.scene, f.frame);
    latest_ = std::move(f);
  }
  meas_ = MeasurementSet{hmd, latest_.zed_in_robot, latest_.zed_in_world, t};

  anchors_.mode =
      mode_ == ViewMode::DecoupledWithMesh ? AnchorMode::MeshAnchored : AnchorMode::NoMesh;
  anchors_ = update_anchors(anchors_, meas_);
  if (calibration_requested_) {
    last_calibration_ = calibrate(meas_.zed_in_robot, meas_.hmd_in_tracking, tick_);
    anchors_ = apply_calibration(anchors_, *last_calibration_);
    calibration_requested_ = false;
    calibrated_last_step_ = true;
    filter_ready_ = false;  // calibration takes effect instantly
  }

  // Low-pass on the virtual tracking frame in the virtual world.
  const Pose tracking_target = anchors_.robot_in_world_virtual * anchors_.tracking_in_robot_virtual;
  if (!filter_ready_) {
    filter_ = make_filter(tracking_target, config_.filter_rate, period_);
    filter_.filter_translation = config_.filter_translation;
    filter_.filter_rotation = config_.filter_rotation;
    filter_ready_ = true;
  } else {
    filter_ = filter_step(filter_, tracking_target);
  }
  VirtualAnchors effective = anchors_;
  effective.tracking_in_robot_virtual = inverse(anchors_.robot_in_world_virtual) * filter_.smoothed;

  view_ = decoupled_view(meas_, effective);

  // Place the HMD relative to the scene the point cloud was captured in.
  const Pose hmd_in_scene = latest_.frame.capture_pose * inverse(view_.zed_in_hmd_virtual);
  CoverageOptions options;
  options.head_locked = mode_ == ViewMode::FixedRGB;
  options.use_mesh = mode_ == ViewMode::DecoupledWithMesh;
  coverage_ = classify_coverage_image(config_.scene, mesh_, config_.hmd, hmd_in_scene,
                                      latest_.frame, options);

  operator_yaw_.push_back(rad2deg(msg.yaw));
  robot_yaw_.push_back(rad2deg(latest_.neck_yaw));
  const auto update_every =
      std::max<std::int64_t>(1, std::llround(config_.metrics.lag_update_s / period_));
  if (tick_ % update_every == 0) current_lag_ = windowed_lag();

  MetricsRow row;
  row.time = t;
  row.operator_yaw_deg = rad2deg(msg.yaw);
  row.operator_pitch_deg = rad2deg(msg.pitch);
  row.robot_yaw_deg = rad2deg(latest_.neck_yaw);
  row.robot_pitch_deg = rad2deg(latest_.neck_pitch);
  row.lag_s = current_lag_;
  row.live_fraction = coverage_.report.live_fraction;
  row.mesh_fraction = coverage_.report.mesh_fraction;
  row.blank_fraction = coverage_.report.blank_fraction;
  row.calibration_residual = view_residual(meas_, effective).total();
  row.gap_deg = rad2deg(forward_axis_angle(Quat::Identity(), view_.zed_in_hmd_virtual.rotation()));
  rows_.push_back(row);
  ++tick_;
  return rows_.back();
}

Snapshot Engine::snapshot() const {
  Snapshot s;
  s.tick = tick_ > 0 ? tick_ - 1 : 0;
  s.time = static_cast<double>(s.tick) * period_;
  s.mode = mode_;
  s.operator_pose = meas_.hmd_in_tracking;
  s.robot_pose = latest_.body_in_world;
  s.robot_yaw_deg = rad2deg(latest_.neck_yaw);
  s.robot_pitch_deg = rad2deg(latest_.neck_pitch);
  s.coverage = coverage_;
  s.scanning = scanning_;
  if (!rows_.empty()) {
    const MetricsRow& r = rows_.back();
    s.operator_yaw_deg = r.operator_yaw_deg;
    s.operator_pitch_deg = r.operator_pitch_deg;
    s.lag_estimate = r.lag_s;
    s.calibration_residual = r.calibration_residual;
    s.gap_deg = r.gap_deg;
  }
  return s;
}

}  // namespace televiz
