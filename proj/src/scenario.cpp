#include "televiz/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace televiz {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<ViewMode, std::string_view>, 3> kModeNames{{
    {ViewMode::FixedRGB, "FixedRGB"},
    {ViewMode::Decoupled, "Decoupled"},
    {ViewMode::DecoupledWithMesh, "DecoupledWithMesh"},
}};

constexpr std::array<std::pair<EventType, std::string_view>, 5> kEventNames{{
    {EventType::Calibrate, "calibrate"},
    {EventType::ScanStart, "scan_start"},
    {EventType::ScanStop, "scan_stop"},
    {EventType::BaseVelocity, "base_velocity"},
    {EventType::SetMode, "set_mode"},
}};

constexpr std::array<std::pair<InstabilityChannel, std::string_view>, 3> kChannelNames{{
    {InstabilityChannel::Command, "command"},
    {InstabilityChannel::Feedback, "feedback"},
    {InstabilityChannel::Both, "both"},
}};

constexpr std::array<std::string_view, 3> kAxisNames{"x", "y", "z"};

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

/// Typed access to one JSON object with field-path error reporting.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path, std::set<std::string_view> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    for (const auto& [key, value] : j_.items()) {
      if (!allowed.contains(key)) throw ConfigError(join(path_, key), "unknown key");
    }
  }

  bool has(std::string_view key) const { return j_.contains(key); }
  const json& at(std::string_view key) const { return j_.at(std::string(key)); }
  std::string path(std::string_view key) const { return join(path_, key); }

  double number(std::string_view key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path(key), "must be finite");
    return d;
  }

  int integer(std::string_view key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(std::string_view key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_unsigned()) throw ConfigError(path(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(std::string_view key, std::string fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  template <class E, std::size_t N>
  E enumeration(std::string_view key, E fallback,
                const std::array<std::pair<E, std::string_view>, N>& names) const {
    if (!has(key)) return fallback;
    const std::string s = string(key, "");
    for (const auto& [value, name] : names) {
      if (name == s) return value;
    }
    throw ConfigError(path(key), "unknown value '" + s + "'");
  }

  template <int N>
  Eigen::Matrix<double, N, 1> vector(std::string_view key,
                                     const Eigen::Matrix<double, N, 1>& fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_array() || v.size() != N) {
      throw ConfigError(path(key), "expected an array of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) {
      if (!v[static_cast<std::size_t>(i)].is_number()) {
        throw ConfigError(index(path(key), static_cast<std::size_t>(i)), "expected a number");
      }
      out[i] = v[static_cast<std::size_t>(i)].get<double>();
    }
    return out;
  }

  Color color(std::string_view key, Color fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_array() || v.size() != 3) throw ConfigError(path(key), "expected [r, g, b]");
    std::array<std::uint8_t, 3> c{};
    for (std::size_t i = 0; i < 3; ++i) {
      if (!v[i].is_number_integer() || v[i].get<int>() < 0 || v[i].get<int>() > 255) {
        throw ConfigError(index(path(key), i), "expected an integer in [0, 255]");
      }
      c[i] = static_cast<std::uint8_t>(v[i].get<int>());
    }
    return {c[0], c[1], c[2]};
  }

  const json& array(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(path(key), "expected an array");
    return v;
  }

 private:
  const json& j_;
  std::string path_;
};

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json to_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }
json to_json(Color c) { return json::array({int{c.r}, int{c.g}, int{c.b}}); }

template <class E, std::size_t N>
std::string name_of(E value, const std::array<std::pair<E, std::string_view>, N>& names) {
  for (const auto& [v, name] : names) {
    if (v == value) return std::string(name);
  }
  return "?";
}

CameraModel parse_camera(const json& j, const std::string& path, const CameraModel& fallback) {
  const ObjectReader r(j, path,
                       {"horizontal_fov_deg", "vertical_fov_deg", "max_range_m", "cols", "rows"});
  CameraModel c;
  c.horizontal_fov_deg = r.number("horizontal_fov_deg", fallback.horizontal_fov_deg);
  c.vertical_fov_deg = r.number("vertical_fov_deg", fallback.vertical_fov_deg);
  c.max_range = r.number("max_range_m", fallback.max_range);
  c.cols = r.integer("cols", fallback.cols);
  c.rows = r.integer("rows", fallback.rows);
  return c;
}

json camera_json(const CameraModel& c) {
  return {{"horizontal_fov_deg", c.horizontal_fov_deg},
          {"vertical_fov_deg", c.vertical_fov_deg},
          {"max_range_m", c.max_range},
          {"cols", c.cols},
          {"rows", c.rows}};
}

SceneModel parse_scene(const json& j, const std::string& path) {
  const ObjectReader r(j, path, {"boxes", "planes"});
  SceneModel scene;
  if (r.has("boxes")) {
    const json& boxes = r.array("boxes");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const ObjectReader b(boxes[i], index(r.path("boxes"), i), {"min", "max", "color"});
      scene.boxes.push_back({b.vector<3>("min", Vec3::Zero()), b.vector<3>("max", Vec3::Zero()),
                             b.color("color", {200, 200, 200})});
    }
  }
  if (r.has("planes")) {
    const json& planes = r.array("planes");
    for (std::size_t i = 0; i < planes.size(); ++i) {
      const ObjectReader p(planes[i], index(r.path("planes"), i),
                           {"axis", "offset", "min", "max", "color"});
      Rect rect;
      const std::string axis = p.string("axis", "z");
      const auto it = std::find(kAxisNames.begin(), kAxisNames.end(), axis);
      if (it == kAxisNames.end()) throw ConfigError(p.path("axis"), "expected x, y or z");
      rect.axis = static_cast<int>(it - kAxisNames.begin());
      rect.offset = p.number("offset", 0.0);
      rect.min = p.vector<2>("min", Eigen::Vector2d::Zero());
      rect.max = p.vector<2>("max", Eigen::Vector2d::Zero());
      rect.color = p.color("color", {200, 200, 200});
      scene.planes.push_back(rect);
    }
  }
  return scene;
}

json scene_json(const SceneModel& scene) {
  json boxes = json::array();
  for (const Box& b : scene.boxes) {
    boxes.push_back({{"min", to_json(b.min)}, {"max", to_json(b.max)}, {"color", to_json(b.color)}});
  }
  json planes = json::array();
  for (const Rect& p : scene.planes) {
    planes.push_back({{"axis", std::string(kAxisNames[static_cast<std::size_t>(p.axis)])},
                      {"offset", p.offset},
                      {"min", to_json(p.min)},
                      {"max", to_json(p.max)},
                      {"color", to_json(p.color)}});
  }
  return {{"boxes", boxes}, {"planes", planes}};
}

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

void validate_camera(const CameraModel& c, const std::string& path) {
  require(c.horizontal_fov_deg > 0.0 && c.horizontal_fov_deg < 180.0,
          path + ".horizontal_fov_deg", "must be in (0, 180)");
  require(c.vertical_fov_deg > 0.0 && c.vertical_fov_deg < 180.0, path + ".vertical_fov_deg",
          "must be in (0, 180)");
  require(c.max_range > 0.0, path + ".max_range_m", "must be positive");
  require(c.cols >= 1 && c.cols <= 4096, path + ".cols", "must be in [1, 4096]");
  require(c.rows >= 1 && c.rows <= 4096, path + ".rows", "must be in [1, 4096]");
}

}  // namespace

std::string_view to_string(ViewMode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "?";
}

std::optional<ViewMode> parse_view_mode(std::string_view s) {
  for (const auto& [m, name] : kModeNames) {
    if (name == s) return m;
  }
  return std::nullopt;
}

std::string_view to_string(EventType type) {
  for (const auto& [t, name] : kEventNames) {
    if (t == type) return name;
  }
  return "?";
}

SceneModel lab_scene() {
  SceneModel s;
  s.boxes.push_back({{-4.0, -4.0, 0.0}, {4.0, 4.0, 3.0}, {205, 200, 190}});   // room
  s.boxes.push_back({{1.5, -0.5, 0.0}, {2.3, 0.5, 0.75}, {139, 90, 43}});     // table
  s.boxes.push_back({{-1.0, 3.4, 0.0}, {1.0, 3.9, 2.0}, {60, 90, 150}});      // shelf
  s.boxes.push_back({{2.5, 2.5, 0.0}, {3.5, 3.5, 1.2}, {90, 140, 80}});       // cabinet
  s.planes.push_back({0, 3.98, {-1.0, 1.0}, {1.0, 2.0}, {220, 60, 50}});      // poster
  return s;
}

ConfigError::ConfigError(std::string field_path, const std::string& message)
    : std::runtime_error(field_path + ": " + message), field_path_(std::move(field_path)) {}

std::int64_t ScenarioConfig::tick_count() const {
  return static_cast<std::int64_t>(std::llround(duration_s * tick_rate_hz));
}

ScenarioConfig parse_scenario(const json& j) {
  const ObjectReader r(j, "",
                       {"name", "duration_s", "tick_rate_hz", "seed", "mode", "filter_rate",
                        "filter_translation", "filter_rotation", "command_delay_s",
                        "feedback_delay_s", "jitter_stddev_s", "instability", "neck", "camera",
                        "hmd", "mesh", "odometry_noise", "operator", "events", "scene",
                        "metrics"});
  ScenarioConfig c;
  c.name = r.string("name", c.name);
  c.duration_s = r.number("duration_s", c.duration_s);
  c.tick_rate_hz = r.number("tick_rate_hz", c.tick_rate_hz);
  c.seed = r.unsigned_integer("seed", c.seed);
  c.mode = r.enumeration("mode", c.mode, kModeNames);
  c.filter_rate = r.number("filter_rate", c.filter_rate);
  c.filter_translation = r.boolean("filter_translation", c.filter_translation);
  c.filter_rotation = r.boolean("filter_rotation", c.filter_rotation);

  NetworkConfig& net = c.network;
  net.command_delay_s = r.number("command_delay_s", net.command_delay_s);
  net.feedback_delay_s = r.number("feedback_delay_s", net.feedback_delay_s);
  net.jitter_stddev_s = r.number("jitter_stddev_s", net.jitter_stddev_s);
  if (r.has("instability") && !r.at("instability").is_null()) {
    const ObjectReader ir(r.at("instability"), "instability",
                          {"start_s", "duration_s", "extra_delay_s", "channel"});
    net.instability = InstabilityEpisode{ir.number("start_s", 0.0), ir.number("duration_s", 0.0),
                                         ir.number("extra_delay_s", 0.0)};
    net.instability_channel = ir.enumeration("channel", net.instability_channel, kChannelNames);
  }

  if (r.has("neck")) {
    const ObjectReader nr(r.at("neck"), "neck",
                          {"yaw_limit_deg", "pitch_limit_deg", "max_velocity_deg_s",
                           "time_constant_s", "neck_offset", "zed_offset"});
    NeckConfig& n = c.neck;
    n.yaw_limit_deg = nr.number("yaw_limit_deg", n.yaw_limit_deg);
    n.pitch_limit_deg = nr.number("pitch_limit_deg", n.pitch_limit_deg);
    n.max_velocity_deg_s = nr.number("max_velocity_deg_s", n.max_velocity_deg_s);
    n.time_constant_s = nr.number("time_constant_s", n.time_constant_s);
    n.neck_offset = nr.vector<3>("neck_offset", n.neck_offset);
    n.zed_offset = nr.vector<3>("zed_offset", n.zed_offset);
  }
  if (r.has("camera")) c.camera = parse_camera(r.at("camera"), "camera", c.camera);
  if (r.has("hmd")) c.hmd = parse_camera(r.at("hmd"), "hmd", c.hmd);

  if (r.has("mesh")) {
    const ObjectReader mr(r.at("mesh"), "mesh", {"cell_size_m", "tint_strength", "prescan"});
    c.mesh.cell_size_m = mr.number("cell_size_m", c.mesh.cell_size_m);
    c.mesh.tint_strength = mr.number("tint_strength", c.mesh.tint_strength);
    constexpr std::array<std::pair<Prescan, std::string_view>, 2> kPrescan{
        {{Prescan::None, "none"}, {Prescan::Full, "full"}}};
    c.mesh.prescan = mr.enumeration("prescan", c.mesh.prescan, kPrescan);
  }
  if (r.has("odometry_noise")) {
    const ObjectReader orr(r.at("odometry_noise"), "odometry_noise",
                           {"translation_stddev_m", "rotation_stddev_deg"});
    c.odometry.translation_stddev_m =
        orr.number("translation_stddev_m", c.odometry.translation_stddev_m);
    c.odometry.rotation_stddev_deg = orr.number("rotation_stddev_deg", c.odometry.rotation_stddev_deg);
  }

  if (r.has("operator")) {
    const ObjectReader opr(r.at("operator"), "operator",
                           {"base_station", "base_station_yaw_deg", "head_position",
                            "keyframes", "sweep"});
    OperatorConfig& op = c.operator_;
    op.base_station = opr.vector<3>("base_station", op.base_station);
    op.base_station_yaw_deg = opr.number("base_station_yaw_deg", op.base_station_yaw_deg);
    op.head_position = opr.vector<3>("head_position", op.head_position);
    if (opr.has("keyframes")) {
      const json& kfs = opr.array("keyframes");
      for (std::size_t i = 0; i < kfs.size(); ++i) {
        const ObjectReader kr(kfs[i], index(opr.path("keyframes"), i),
                              {"t", "yaw_deg", "pitch_deg", "offset"});
        op.keyframes.push_back({kr.number("t", 0.0), kr.number("yaw_deg", 0.0),
                                kr.number("pitch_deg", 0.0),
                                kr.vector<3>("offset", Vec3::Zero())});
      }
    }
    if (opr.has("sweep") && !opr.at("sweep").is_null()) {
      const ObjectReader sr(opr.at("sweep"), opr.path("sweep"),
                            {"start_s", "duration_s", "amplitude_deg", "period_s", "center_deg"});
      HeadSweep s;
      s.start_s = sr.number("start_s", s.start_s);
      s.duration_s = sr.number("duration_s", s.duration_s);
      s.amplitude_deg = sr.number("amplitude_deg", s.amplitude_deg);
      s.period_s = sr.number("period_s", s.period_s);
      s.center_deg = sr.number("center_deg", s.center_deg);
      op.sweep = s;
    }
  }

  if (r.has("events")) {
    const json& evs = r.array("events");
    for (std::size_t i = 0; i < evs.size(); ++i) {
      const ObjectReader er(evs[i], index("events", i),
                            {"t", "type", "linear_velocity_m_s", "yaw_rate_deg_s", "mode"});
      ScriptEvent e;
      e.t = er.number("t", 0.0);
      if (!er.has("type")) throw ConfigError(er.path("type"), "missing");
      e.type = er.enumeration("type", e.type, kEventNames);
      if (e.type != EventType::BaseVelocity) {
        for (std::string_view key : {"linear_velocity_m_s", "yaw_rate_deg_s"}) {
          if (er.has(key)) throw ConfigError(er.path(key), "only valid for base_velocity events");
        }
      }
      if (e.type != EventType::SetMode && er.has("mode")) {
        throw ConfigError(er.path("mode"), "only valid for set_mode events");
      }
      e.linear_velocity = er.number("linear_velocity_m_s", 0.0);
      e.yaw_rate_deg_s = er.number("yaw_rate_deg_s", 0.0);
      e.mode = er.enumeration("mode", e.mode, kModeNames);
      c.events.push_back(e);
    }
  }

  if (r.has("scene")) c.scene = parse_scene(r.at("scene"), "scene");

  if (r.has("metrics")) {
    const ObjectReader mr(r.at("metrics"), "metrics",
                          {"lag_window_s", "lag_max_s", "lag_update_s", "steady_window_s"});
    MetricsConfig& m = c.metrics;
    m.lag_window_s = mr.number("lag_window_s", m.lag_window_s);
    m.lag_max_s = mr.number("lag_max_s", m.lag_max_s);
    m.lag_update_s = mr.number("lag_update_s", m.lag_update_s);
    m.steady_window_s = mr.number("steady_window_s", m.steady_window_s);
  }

  validate(c);
  return c;
}

ScenarioConfig parse_scenario_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

void validate(const ScenarioConfig& c) {
  require(c.duration_s > 0.0, "duration_s", "must be positive");
  require(c.tick_rate_hz > 0.0 && c.tick_rate_hz <= 1000.0, "tick_rate_hz", "must be in (0, 1000]");
  require(c.filter_rate > 0.0 && c.filter_rate <= 1.0, "filter_rate", "must be in (0, 1]");
  require(c.network.command_delay_s >= 0.0, "command_delay_s", "must be >= 0");
  require(c.network.feedback_delay_s >= 0.0, "feedback_delay_s", "must be >= 0");
  require(c.network.jitter_stddev_s >= 0.0, "jitter_stddev_s", "must be >= 0");
  if (c.network.instability) {
    require(c.network.instability->start >= 0.0, "instability.start_s", "must be >= 0");
    require(c.network.instability->duration >= 0.0, "instability.duration_s", "must be >= 0");
    require(c.network.instability->extra_delay >= 0.0, "instability.extra_delay_s",
            "must be >= 0");
  }
  require(c.neck.yaw_limit_deg >= 0.0 && c.neck.yaw_limit_deg < 180.0, "neck.yaw_limit_deg",
          "must be in [0, 180)");
  require(c.neck.pitch_limit_deg >= 0.0 && c.neck.pitch_limit_deg <= 90.0,
          "neck.pitch_limit_deg", "must be in [0, 90]");
  require(c.neck.max_velocity_deg_s >= 0.0, "neck.max_velocity_deg_s", "must be >= 0");
  require(c.neck.time_constant_s >= 0.0, "neck.time_constant_s", "must be >= 0");
  validate_camera(c.camera, "camera");
  validate_camera(c.hmd, "hmd");
  require(c.mesh.cell_size_m > 0.0, "mesh.cell_size_m", "must be positive");
  require(c.mesh.tint_strength > 0.0 && c.mesh.tint_strength <= 1.0, "mesh.tint_strength",
          "must be in (0, 1]");
  require(c.odometry.translation_stddev_m >= 0.0, "odometry_noise.translation_stddev_m",
          "must be >= 0");
  require(c.odometry.rotation_stddev_deg >= 0.0, "odometry_noise.rotation_stddev_deg",
          "must be >= 0");
  const auto& kfs = c.operator_.keyframes;
  for (std::size_t i = 0; i < kfs.size(); ++i) {
    require(kfs[i].t >= 0.0, index("operator.keyframes", i) + ".t", "must be >= 0");
    if (i > 0) {
      require(kfs[i].t >= kfs[i - 1].t, index("operator.keyframes", i) + ".t",
              "keyframes must be in time order");
    }
  }
  if (c.operator_.sweep) {
    require(c.operator_.sweep->period_s > 0.0, "operator.sweep.period_s", "must be positive");
    require(c.operator_.sweep->duration_s >= 0.0, "operator.sweep.duration_s", "must be >= 0");
  }
  for (std::size_t i = 0; i < c.events.size(); ++i) {
    require(c.events[i].t >= 0.0, index("events", i) + ".t", "must be >= 0");
  }
  require(!c.scene.empty(), "scene", "must contain at least one box or plane");
  for (std::size_t i = 0; i < c.scene.boxes.size(); ++i) {
    const Box& b = c.scene.boxes[i];
    require((b.min.array() < b.max.array()).all(), index("scene.boxes", i),
            "min must be below max on every axis");
  }
  for (std::size_t i = 0; i < c.scene.planes.size(); ++i) {
    const Rect& p = c.scene.planes[i];
    require((p.min.array() < p.max.array()).all(), index("scene.planes", i),
            "min must be below max on both axes");
  }
  const MetricsConfig& m = c.metrics;
  require(m.lag_max_s > 0.0, "metrics.lag_max_s", "must be positive");
  require(m.lag_window_s > m.lag_max_s, "metrics.lag_window_s", "must exceed metrics.lag_max_s");
  require(m.lag_update_s > 0.0, "metrics.lag_update_s", "must be positive");
  require(m.steady_window_s > 0.0, "metrics.steady_window_s", "must be positive");
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["duration_s"] = c.duration_s;
  j["tick_rate_hz"] = c.tick_rate_hz;
  j["seed"] = c.seed;
  j["mode"] = std::string(to_string(c.mode));
  j["filter_rate"] = c.filter_rate;
  j["filter_translation"] = c.filter_translation;
  j["filter_rotation"] = c.filter_rotation;
  j["command_delay_s"] = c.network.command_delay_s;
  j["feedback_delay_s"] = c.network.feedback_delay_s;
  j["jitter_stddev_s"] = c.network.jitter_stddev_s;
  if (c.network.instability) {
    j["instability"] = {{"start_s", c.network.instability->start},
                        {"duration_s", c.network.instability->duration},
                        {"extra_delay_s", c.network.instability->extra_delay},
                        {"channel", name_of(c.network.instability_channel, kChannelNames)}};
  }
  j["neck"] = {{"yaw_limit_deg", c.neck.yaw_limit_deg},
               {"pitch_limit_deg", c.neck.pitch_limit_deg},
               {"max_velocity_deg_s", c.neck.max_velocity_deg_s},
               {"time_constant_s", c.neck.time_constant_s},
               {"neck_offset", to_json(c.neck.neck_offset)},
               {"zed_offset", to_json(c.neck.zed_offset)}};
  j["camera"] = camera_json(c.camera);
  j["hmd"] = camera_json(c.hmd);
  j["mesh"] = {{"cell_size_m", c.mesh.cell_size_m},
               {"tint_strength", c.mesh.tint_strength},
               {"prescan", c.mesh.prescan == Prescan::Full ? "full" : "none"}};
  j["odometry_noise"] = {{"translation_stddev_m", c.odometry.translation_stddev_m},
                         {"rotation_stddev_deg", c.odometry.rotation_stddev_deg}};
  json keyframes = json::array();
  for (const HeadKeyframe& k : c.operator_.keyframes) {
    keyframes.push_back({{"t", k.t},
                         {"yaw_deg", k.yaw_deg},
                         {"pitch_deg", k.pitch_deg},
                         {"offset", to_json(k.offset)}});
  }
  json op = {{"base_station", to_json(c.operator_.base_station)},
             {"base_station_yaw_deg", c.operator_.base_station_yaw_deg},
             {"head_position", to_json(c.operator_.head_position)},
             {"keyframes", keyframes}};
  if (c.operator_.sweep) {
    const HeadSweep& s = *c.operator_.sweep;
    op["sweep"] = {{"start_s", s.start_s},
                   {"duration_s", s.duration_s},
                   {"amplitude_deg", s.amplitude_deg},
                   {"period_s", s.period_s},
                   {"center_deg", s.center_deg}};
  }
  j["operator"] = op;
  json events = json::array();
  for (const ScriptEvent& e : c.events) {
    json ej = {{"t", e.t}, {"type", std::string(to_string(e.type))}};
    if (e.type == EventType::BaseVelocity) {
      ej["linear_velocity_m_s"] = e.linear_velocity;
      ej["yaw_rate_deg_s"] = e.yaw_rate_deg_s;
    }
    if (e.type == EventType::SetMode) ej["mode"] = std::string(to_string(e.mode));
    events.push_back(ej);
  }
  j["events"] = events;
  j["scene"] = scene_json(c.scene);
  j["metrics"] = {{"lag_window_s", c.metrics.lag_window_s},
                  {"lag_max_s", c.metrics.lag_max_s},
                  {"lag_update_s", c.metrics.lag_update_s},
                  {"steady_window_s", c.metrics.steady_window_s}};
  return j;
}

std::string serialize_scenario(const ScenarioConfig& config) {
  return to_json(config).dump(2) + "\n";
}

}  // namespace televiz
