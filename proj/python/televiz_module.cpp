#include "televiz/calibration.hpp"
#include "televiz/harness.hpp"
#include "televiz/lag.hpp"
#include "televiz/wire.hpp"
#include "televiz/world.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace py::literals;
using namespace televiz;

namespace {

Pose pose_from_matrix(const Eigen::Matrix4d& m) {
  return Pose(Quat(Eigen::Matrix3d(m.topLeftCorner<3, 3>())), m.topRightCorner<3, 1>());
}

py::dict row_dict(const MetricsRow& r) {
  return py::dict("time_s"_a = r.time, "operator_yaw_deg"_a = r.operator_yaw_deg,
                  "operator_pitch_deg"_a = r.operator_pitch_deg, "robot_yaw_deg"_a = r.robot_yaw_deg,
                  "robot_pitch_deg"_a = r.robot_pitch_deg, "lag_s"_a = r.lag_s,
                  "live_fraction"_a = r.live_fraction, "mesh_fraction"_a = r.mesh_fraction,
                  "blank_fraction"_a = r.blank_fraction,
                  "calibration_residual"_a = r.calibration_residual, "gap_deg"_a = r.gap_deg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decoupled teleoperation viewpoint simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<wire::WireError>(m, "WireError", PyExc_ValueError);
  py::register_exception<DegenerateSignal>(m, "DegenerateSignal", PyExc_ValueError);
  py::register_exception<PointBehindCamera>(m, "PointBehindCamera", PyExc_ValueError);

  m.def("preset", [](const std::string& name) {
    const auto c = presets::by_name(name);
    if (!c) throw py::key_error(name);
    return serialize_scenario(*c);
  }, "name"_a);
  m.def("preset_names", [] {
    std::vector<std::string> out;
    for (auto n : presets::names()) out.emplace_back(n);
    return out;
  });
  m.def("normalize_scenario", [](const std::string& text) {
    return serialize_scenario(parse_scenario_text(text));
  }, "scenario"_a);

  m.def("run_scenario", [](const std::string& text) {
    const ScenarioConfig c = parse_scenario_text(text);
    RunResult r;
    {
      py::gil_scoped_release release;
      r = run_scenario(c);
    }
    py::list rows;
    for (const MetricsRow& row : r.metrics) rows.append(row_dict(row));
    return py::make_tuple(rows, summary_json(r.summary).dump());
  }, "scenario"_a);

  m.def("compare_modes", [](const std::string& text) {
    const ScenarioConfig c = parse_scenario_text(text);
    std::vector<ModeResult> results;
    {
      py::gil_scoped_release release;
      results = compare_modes(c);
    }
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& r : results) out.emplace_back(to_string(r.mode), summary_json(r.summary).dump());
    return out;
  }, "scenario"_a);

  m.def("sweep_filter", [](const std::string& text, const std::vector<double>& rates) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : sweep_filter(parse_scenario_text(text), rates)) out.emplace_back(p.rate, p.lag_ms);
    return out;
  }, "scenario"_a, "rates"_a);

  m.def("calibrate", [](const Eigen::Matrix4d& zed_in_robot, const Eigen::Matrix4d& hmd_in_tracking) {
    const CalibrationResult r = calibrate(pose_from_matrix(zed_in_robot), pose_from_matrix(hmd_in_tracking));
    return py::make_tuple(r.tracking_in_robot_virtual.matrix(), r.residual);
  }, "zed_in_robot"_a, "hmd_in_tracking"_a,
        "Returns (tracking_in_robot_virtual, residual); poses are 4x4 homogeneous matrices.");

  m.def("billboard_distortion", [](const Eigen::Vector3d& point, const Eigen::Matrix4d& camera,
                                   const Eigen::Matrix4d& hmd, double depth) {
    return billboard_distortion(point, pose_from_matrix(camera), pose_from_matrix(hmd), depth);
  }, "point"_a, "camera_pose"_a, "hmd_pose"_a, "billboard_depth"_a = 1.0);

  m.def("measure_head_latency", [](const std::vector<double>& op, const std::vector<double>& robot,
                                   double period, double max_lag) {
    return measure_head_latency(op, robot, period, max_lag);
  }, "operator_yaw"_a, "robot_yaw"_a, "sample_period"_a, "max_lag_s"_a = 3.0);

  py::class_<Engine>(m, "Engine")
      .def(py::init([](const std::string& text) { return Engine(parse_scenario_text(text)); }),
           "scenario"_a)
      .def("step", [](Engine& e) { return row_dict(e.step()); })
      .def("command", [](Engine& e, const std::string& msg) {
        const Command c = wire::parse_command_text(msg);
        e.enqueue(c);
        return wire::ack_message(c, e.tick()).dump();
      }, "message"_a, "Queues a wire-format command and returns the ack message.")
      .def("snapshot", [](const Engine& e) { return wire::snapshot_message(e.snapshot()).dump(); })
      .def_property_readonly("tick", &Engine::tick)
      .def_property_readonly("time", &Engine::time)
      .def_property_readonly("done", &Engine::done);
}
