#pragma once

#include "televiz/geometry.hpp"
#include "televiz/netsim.hpp"
#include "televiz/world.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace televiz {

enum class ViewMode { FixedRGB, Decoupled, DecoupledWithMesh };

std::string_view to_string(ViewMode mode);
std::optional<ViewMode> parse_view_mode(std::string_view s);

/// Default lab: an 8 x 8 x 3 m room with a table, a shelf, a cabinet and a
/// poster on the front wall.
SceneModel lab_scene();

/// Invalid scenario input; `field_path()` names the offending key, e.g.
/// "neck.yaw_limit_deg" or "events[3].t".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field_path, const std::string& message);
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

/// Operator head pose at `t`; yaw/pitch in degrees, offset in meters from the
/// nominal head position. Linearly interpolated between keyframes.
struct HeadKeyframe {
  double t = 0.0;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  Vec3 offset = Vec3::Zero();
  friend bool operator==(const HeadKeyframe&, const HeadKeyframe&) = default;
};

/// Sinusoidal yaw sweep overriding keyframe yaw inside its window.
struct HeadSweep {
  double start_s = 0.0;
  double duration_s = 0.0;
  double amplitude_deg = 75.0;
  double period_s = 6.0;
  double center_deg = 0.0;
  friend bool operator==(const HeadSweep&, const HeadSweep&) = default;
};

enum class EventType { Calibrate, ScanStart, ScanStop, BaseVelocity, SetMode };

std::string_view to_string(EventType type);

struct ScriptEvent {
  double t = 0.0;
  EventType type = EventType::Calibrate;
  double linear_velocity = 0.0;  // m/s along body +x, BaseVelocity only
  double yaw_rate_deg_s = 0.0;   // BaseVelocity only
  ViewMode mode = ViewMode::Decoupled;  // SetMode only
  friend bool operator==(const ScriptEvent&, const ScriptEvent&) = default;
};

enum class InstabilityChannel { Command, Feedback, Both };

struct NetworkConfig {
  double command_delay_s = 0.2;
  double feedback_delay_s = 0.2;
  double jitter_stddev_s = 0.0;
  std::optional<InstabilityEpisode> instability;
  InstabilityChannel instability_channel = InstabilityChannel::Feedback;
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct NeckConfig {
  double yaw_limit_deg = 55.0;
  double pitch_limit_deg = 30.0;
  double max_velocity_deg_s = 120.0;  // 0 = unlimited
  double time_constant_s = 0.1;       // first-order tracking; 0 = immediate
  Vec3 neck_offset{0.0, 0.0, 1.5};    // neck joint in body frame
  Vec3 zed_offset{0.1, 0.0, 0.1};     // camera in head frame
  friend bool operator==(const NeckConfig&, const NeckConfig&) = default;
};

struct OperatorConfig {
  Vec3 base_station{1.5, 1.5, 2.2};  // base station in tracking space
  double base_station_yaw_deg = -135.0;
  Vec3 head_position{0.0, 0.0, 1.65};
  std::vector<HeadKeyframe> keyframes;
  std::optional<HeadSweep> sweep;
  friend bool operator==(const OperatorConfig&, const OperatorConfig&) = default;
};

enum class Prescan { None, Full };

struct MeshConfig {
  double cell_size_m = 0.05;
  double tint_strength = 0.35;
  Prescan prescan = Prescan::None;
  friend bool operator==(const MeshConfig&, const MeshConfig&) = default;
};

struct OdometryNoise {
  double translation_stddev_m = 0.0;
  double rotation_stddev_deg = 0.0;
  friend bool operator==(const OdometryNoise&, const OdometryNoise&) = default;
};

struct MetricsConfig {
  double lag_window_s = 8.0;    // trailing window for the per-row lag
  double lag_max_s = 3.0;       // largest shift searched
  double lag_update_s = 0.25;   // windowed lag recomputed at this interval
  double steady_window_s = 1.0; // tail averaged for the steady-state gap
  friend bool operator==(const MetricsConfig&, const MetricsConfig&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  double duration_s = 10.0;
  double tick_rate_hz = 60.0;
  std::uint64_t seed = 1;
  ViewMode mode = ViewMode::Decoupled;
  double filter_rate = 0.2;
  bool filter_translation = true;
  bool filter_rotation = true;
  NetworkConfig network;
  NeckConfig neck;
  CameraModel camera{90.0, 60.0, 10.0, 96, 64};
  CameraModel hmd{107.0, 98.0, 50.0, 64, 64};
  MeshConfig mesh;
  OdometryNoise odometry;
  OperatorConfig operator_;
  std::vector<ScriptEvent> events;
  SceneModel scene = lab_scene();
  MetricsConfig metrics;

  double period() const { return 1.0 / tick_rate_hz; }
  std::int64_t tick_count() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError on unknown enum values, wrong types or out-of-range
/// numbers. Missing keys take defaults.
ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig parse_scenario_text(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const ScenarioConfig& config);
std::string serialize_scenario(const ScenarioConfig& config);

/// Checks cross-field ranges; parse_scenario calls this.
void validate(const ScenarioConfig& config);

}  // namespace televiz
