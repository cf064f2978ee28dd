#include "televiz/wire.hpp"

#include <cmath>

namespace televiz::wire {

namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json pose_json(const Pose& p) {
  const Quat& q = p.rotation();
  const Vec3& t = p.translation();
  return {{"position", {t.x(), t.y(), t.z()}}, {"orientation", {q.w(), q.x(), q.y(), q.z()}}};
}

char label_char(CoverageLabel l) {
  switch (l) {
    case CoverageLabel::Live:
      return 'L';
    case CoverageLabel::Mesh:
      return 'M';
    case CoverageLabel::Blank:
      return 'B';
  }
  return 'B';
}

double number(const json& msg, const char* key, bool required, double fallback = 0.0) {
  const auto it = msg.find(key);
  if (it == msg.end()) {
    if (required) throw WireError(std::string("missing field '") + key + "'");
    return fallback;
  }
  if (!it->is_number()) throw WireError(std::string("field '") + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw WireError(std::string("field '") + key + "' must be finite");
  return v;
}

std::string text(const json& msg, const char* key) {
  const auto it = msg.find(key);
  if (it == msg.end()) throw WireError(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw WireError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

json snapshot_message(const Snapshot& s) {
  const CoverageImage& img = s.coverage;
  std::string labels;
  labels.reserve(img.labels.size());
  for (CoverageLabel l : img.labels) labels.push_back(label_char(l));
  json colors = json::array();
  colors.get_ref<json::array_t&>().reserve(img.colors.size() * 3);
  for (const Color& c : img.colors) {
    colors.push_back(c.r);
    colors.push_back(c.g);
    colors.push_back(c.b);
  }

  json op = pose_json(s.operator_pose);
  op["yaw_deg"] = s.operator_yaw_deg;
  op["pitch_deg"] = s.operator_pitch_deg;
  json robot = pose_json(s.robot_pose);
  robot["head_yaw_deg"] = s.robot_yaw_deg;
  robot["head_pitch_deg"] = s.robot_pitch_deg;

  return {
      {"type", "snapshot"},
      {"tick", s.tick},
      {"time", s.time},
      {"mode", to_string(s.mode)},
      {"operator_pose", std::move(op)},
      {"robot_pose", std::move(robot)},
      {"coverage_image",
       {{"cols", img.cols}, {"rows", img.rows}, {"labels", std::move(labels)}, {"colors", std::move(colors)}}},
      {"coverage_report",
       {{"live_fraction", img.report.live_fraction},
        {"mesh_fraction", img.report.mesh_fraction},
        {"blank_fraction", img.report.blank_fraction}}},
      {"lag_estimate", std::isfinite(s.lag_estimate) ? json(s.lag_estimate) : json(nullptr)},
      {"calibration_residual", s.calibration_residual},
      {"gap_deg", s.gap_deg},
      {"scanning", s.scanning},
  };
}

Command parse_command(const json& msg) {
  if (!msg.is_object()) throw WireError("message must be an object");
  if (text(msg, "type") != "command") throw WireError("expected type 'command'");
  const std::string name = text(msg, "command");
  if (name == "head_target") {
    return command::HeadTarget{number(msg, "yaw", true), number(msg, "pitch", false)};
  }
  if (name == "base_velocity") {
    return command::BaseVelocity{number(msg, "v", true), number(msg, "yaw_rate", false)};
  }
  if (name == "calibrate") return command::Calibrate{};
  if (name == "set_mode") {
    const std::string mode = text(msg, "mode");
    const auto m = parse_view_mode(mode);
    if (!m) throw WireError("unknown mode '" + mode + "'");
    return command::SetMode{*m};
  }
  if (name == "scan") {
    const std::string action = text(msg, "action");
    if (action == "start") return command::Scan{true};
    if (action == "stop") return command::Scan{false};
    throw WireError("scan action must be 'start' or 'stop'");
  }
  throw WireError("unknown command '" + name + "'");
}

Command parse_command_text(std::string_view text) {
  json msg = json::parse(text, nullptr, false);
  if (msg.is_discarded()) throw WireError("message is not valid JSON");
  return parse_command(msg);
}

std::string_view command_name(const Command& c) {
  return std::visit(Overloaded{
                        [](const command::HeadTarget&) { return std::string_view("head_target"); },
                        [](const command::BaseVelocity&) { return std::string_view("base_velocity"); },
                        [](const command::Calibrate&) { return std::string_view("calibrate"); },
                        [](const command::SetMode&) { return std::string_view("set_mode"); },
                        [](const command::Scan&) { return std::string_view("scan"); },
                    },
                    c);
}

json command_message(const Command& c) {
  json msg = {{"type", "command"}, {"command", command_name(c)}};
  std::visit(Overloaded{
                 [&](const command::HeadTarget& h) {
                   msg["yaw"] = h.yaw;
                   msg["pitch"] = h.pitch;
                 },
                 [&](const command::BaseVelocity& b) {
                   msg["v"] = b.v;
                   msg["yaw_rate"] = b.yaw_rate;
                 },
                 [](const command::Calibrate&) {},
                 [&](const command::SetMode& m) { msg["mode"] = to_string(m.mode); },
                 [&](const command::Scan& s) { msg["action"] = s.start ? "start" : "stop"; },
             },
             c);
  return msg;
}

json ack_message(const Command& c, std::int64_t apply_tick) {
  return {{"type", "ack"}, {"command", command_name(c)}, {"tick", apply_tick}};
}

json error_message(std::string_view message) {
  return {{"type", "error"}, {"message", message}};
}

}  // namespace televiz::wire
