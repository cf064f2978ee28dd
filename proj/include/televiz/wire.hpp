#pragma once

#include "televiz/engine.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace televiz::wire {

/// Malformed or out-of-range command message.
class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"type": "snapshot", "tick", "time", "mode", "operator_pose", "robot_pose",
///  "coverage_image", "coverage_report", "lag_estimate", "calibration_residual", ...}
/// Coverage labels are one character per ray, row-major: L live, M mesh, B blank.
nlohmann::json snapshot_message(const Snapshot& s);

/// Parses {"type": "command", "command": <name>, ...fields}.
Command parse_command(const nlohmann::json& msg);
Command parse_command_text(std::string_view text);

nlohmann::json command_message(const Command& c);
std::string_view command_name(const Command& c);

/// Acknowledges a command; `apply_tick` is the tick that will apply it.
nlohmann::json ack_message(const Command& c, std::int64_t apply_tick);
nlohmann::json error_message(std::string_view message);

}  // namespace televiz::wire
