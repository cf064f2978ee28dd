#include "televiz/wire.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace televiz;
using nlohmann::json;

namespace {

std::string parse_error(std::string_view text) {
  try {
    wire::parse_command_text(text);
  } catch (const wire::WireError& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("commands round-trip through their messages") {
  const std::vector<Command> commands{
      command::HeadTarget{12.5, -3.0},        command::BaseVelocity{0.4, 10.0},
      command::Calibrate{},                   command::SetMode{ViewMode::FixedRGB},
      command::SetMode{ViewMode::DecoupledWithMesh}, command::Scan{true},
      command::Scan{false},
  };
  for (const Command& c : commands) {
    const json msg = wire::command_message(c);
    CHECK(msg["type"] == "command");
    CHECK(msg["command"] == wire::command_name(c));
    const Command back = wire::parse_command_text(msg.dump());
    CHECK(wire::command_message(back) == msg);
  }
}

TEST_CASE("optional fields default to zero") {
  const Command h = wire::parse_command_text(R"({"type":"command","command":"head_target","yaw":30})");
  REQUIRE(std::holds_alternative<command::HeadTarget>(h));
  CHECK(std::get<command::HeadTarget>(h).yaw == 30.0);
  CHECK(std::get<command::HeadTarget>(h).pitch == 0.0);
  const Command b = wire::parse_command_text(R"({"type":"command","command":"base_velocity","v":0.2})");
  CHECK(std::get<command::BaseVelocity>(b).yaw_rate == 0.0);
}

TEST_CASE("malformed commands are rejected with a reason") {
  CHECK(parse_error("not json") == "message is not valid JSON");
  CHECK(parse_error("[1]") == "message must be an object");
  CHECK(parse_error(R"({"type":"snapshot"})") == "expected type 'command'");
  CHECK(parse_error(R"({"type":"command"})") == "missing field 'command'");
  CHECK(parse_error(R"({"type":"command","command":"jump"})") == "unknown command 'jump'");
  CHECK(parse_error(R"({"type":"command","command":"head_target"})") == "missing field 'yaw'");
  CHECK(parse_error(R"({"type":"command","command":"head_target","yaw":"left"})") ==
        "field 'yaw' must be a number");
  CHECK(parse_error(R"({"type":"command","command":"set_mode","mode":"Mono"})") ==
        "unknown mode 'Mono'");
  CHECK(parse_error(R"({"type":"command","command":"scan","action":"pause"})") ==
        "scan action must be 'start' or 'stop'");
}

TEST_CASE("ack and error shapes") {
  const json ack = wire::ack_message(command::Calibrate{}, 42);
  CHECK(ack == json{{"type", "ack"}, {"command", "calibrate"}, {"tick", 42}});
  const json err = wire::error_message("nope");
  CHECK(err == json{{"type", "error"}, {"message", "nope"}});
}

TEST_CASE("snapshot message") {
  Snapshot s;
  s.tick = 7;
  s.time = 7.0 / 60.0;
  s.mode = ViewMode::DecoupledWithMesh;
  s.operator_pose = Pose(rotation_z(0.5), Vec3(1, 2, 3));
  s.robot_yaw_deg = 10.0;
  s.lag_estimate = std::nan("");
  s.calibration_residual = 0.25;
  s.coverage.cols = 3;
  s.coverage.rows = 2;
  s.coverage.labels = {CoverageLabel::Live, CoverageLabel::Live, CoverageLabel::Mesh,
                       CoverageLabel::Blank, CoverageLabel::Live, CoverageLabel::Mesh};
  s.coverage.colors = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {0, 0, 0}, {10, 11, 12}, {13, 14, 15}};
  s.coverage.report = {0.5, 1.0 / 3.0, 1.0 / 6.0};

  const json m = wire::snapshot_message(s);
  CHECK(m["type"] == "snapshot");
  CHECK(m["tick"] == 7);
  CHECK(m["mode"] == "DecoupledWithMesh");
  CHECK(m["lag_estimate"].is_null());
  CHECK(m["calibration_residual"] == 0.25);
  CHECK(m["scanning"] == false);
  CHECK(m["operator_pose"]["position"] == json{1.0, 2.0, 3.0});
  const json& q = m["operator_pose"]["orientation"];
  CHECK(q[0].get<double>() == doctest::Approx(std::cos(0.25)));
  CHECK(q[3].get<double>() == doctest::Approx(std::sin(0.25)));
  CHECK(m["robot_pose"]["head_yaw_deg"] == 10.0);
  const json& img = m["coverage_image"];
  CHECK(img["cols"] == 3);
  CHECK(img["rows"] == 2);
  const std::string labels = img["labels"];
  CHECK(labels == "LLMBLM");
  CHECK(img["colors"].size() == 18u);
  CHECK(img["colors"][12] == 10);
  const json& rep = m["coverage_report"];
  CHECK(rep["live_fraction"].get<double>() + rep["mesh_fraction"].get<double>() +
            rep["blank_fraction"].get<double>() ==
        doctest::Approx(1.0));
  // Label counts agree with the report.
  CHECK(static_cast<double>(std::count(labels.begin(), labels.end(), 'L')) / 6.0 ==
        doctest::Approx(rep["live_fraction"].get<double>()));
}
