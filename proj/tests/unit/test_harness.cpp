#include "televiz/harness.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

using namespace televiz;

namespace {

ScenarioConfig coarse(ScenarioConfig c) {
  c.camera.cols = 32;
  c.camera.rows = 24;
  c.hmd.cols = 24;
  c.hmd.rows = 24;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("metrics csv") {
  MetricsRow r;
  r.time = 0.1;
  r.lag_s = std::nan("");
  r.live_fraction = 1.0 / 3.0;
  std::ostringstream os;
  write_metrics_csv(os, std::vector{r});
  const auto ls = lines(os.str());
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] ==
        "time_s,operator_yaw_deg,operator_pitch_deg,robot_yaw_deg,robot_pitch_deg,lag_s,"
        "live_fraction,mesh_fraction,blank_fraction,calibration_residual,gap_deg");
  CHECK(ls[1] == "0.1,0,0,0,0,nan,0.3333333333333333,0,0,0,0");
}

TEST_CASE("summary json keys and nulls") {
  Summary s;
  s.episode_lag_s = std::nan("");
  const nlohmann::json j = summary_json(s);
  for (const char* key : {"name", "mode", "seed", "ticks", "head_latency_s", "mean_lag_s",
                          "peak_lag_s", "episode_lag_s", "steady_state_gap_deg",
                          "mean_live_fraction", "mean_mesh_fraction", "mean_blank_fraction",
                          "final_calibration_residual", "max_calibration_residual", "mesh_cells"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["episode_lag_s"].is_null());
  CHECK(j["mode"] == "Decoupled");
}

TEST_CASE("every preset is valid and named") {
  for (auto name : presets::names()) {
    const auto c = presets::by_name(name);
    REQUIRE(c.has_value());
    CHECK(c->name == name);
    CHECK_NOTHROW(validate(*c));
    REQUIRE_FALSE(c->events.empty());
    CHECK(c->events.front().type == EventType::Calibrate);
  }
  CHECK_FALSE(presets::by_name("nope").has_value());
}

TEST_CASE("static aligned view has no blank in any mode") {
  for (ViewMode m : {ViewMode::FixedRGB, ViewMode::Decoupled, ViewMode::DecoupledWithMesh}) {
    CAPTURE(to_string(m));
    const RunResult r = run_scenario(coarse(presets::static_aligned(m)));
    for (const MetricsRow& row : r.metrics) CHECK(row.blank_fraction == 0.0);
    CHECK(r.summary.max_residual < 1e-9);
    CHECK(r.summary.steady_state_gap_deg < 1e-6);
  }
}

TEST_CASE("zero delay fixed camera: no lag, no blank") {
  ScenarioConfig c = coarse(presets::zero_delay_fixed());
  const RunResult r = run_scenario(c);
  CHECK(r.summary.head_latency_s == 0.0);
  CHECK(r.summary.mean_blank < 1e-12);
  CHECK(r.summary.mean_lag_s == 0.0);
}

TEST_CASE("turning past the scanned region leaves blank in mesh mode") {
  const RunResult r = run_scenario(coarse(presets::turn_beyond_scanned()));
  CHECK(r.summary.mesh_cells > 0);
  CHECK(r.metrics.back().blank_fraction > 0.0);
  CHECK(r.metrics.back().mesh_fraction > 0.0);
}

TEST_CASE("compare modes keeps the script and orders the blank") {
  ScenarioConfig c = coarse(presets::head_turn(5));
  const auto results = compare_modes(c);
  REQUIRE(results.size() == 3);
  CHECK(results[0].mode == ViewMode::FixedRGB);
  CHECK(results[1].mode == ViewMode::Decoupled);
  CHECK(results[2].mode == ViewMode::DecoupledWithMesh);
  CHECK(results[0].summary.mean_blank >= results[1].summary.mean_blank);
  CHECK(results[1].summary.mean_blank > results[2].summary.mean_blank);
  CHECK(results[0].summary.mean_mesh == 0.0);
  CHECK(results[1].summary.mean_mesh == 0.0);
  std::ostringstream os;
  write_comparison(os, results);
  const auto ls = lines(os.str());
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "mode,mean_live_fraction,mean_mesh_fraction,mean_blank_fraction");
  CHECK(ls[1].rfind("FixedRGB,", 0) == 0);
}

TEST_CASE("filter sweep is monotone") {
  const std::vector<double> rates{1.0, 0.5, 0.2, 0.1, 0.05};
  const auto points = sweep_filter(presets::latency_sweep(), rates);
  REQUIRE(points.size() == rates.size());
  CHECK(points[0].lag_ms == 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) CHECK(points[i].lag_ms > points[i - 1].lag_ms);
  CHECK(points[2].lag_ms >= 40.0);
  CHECK(points[2].lag_ms <= 80.0);
  std::ostringstream os;
  write_filter_sweep_csv(os, points);
  CHECK(lines(os.str()).front() == "rate,lag_ms");
  CHECK(lines(os.str())[1] == "1,0");
}

TEST_CASE("run is deterministic") {
  ScenarioConfig c = coarse(presets::head_turn(7));
  c.duration_s = 5.0;
  std::ostringstream a;
  std::ostringstream b;
  write_metrics_csv(a, run_scenario(c).metrics);
  write_metrics_csv(b, run_scenario(c).metrics);
  CHECK(a.str() == b.str());
  c.seed = 8;
  std::ostringstream other;
  write_metrics_csv(other, run_scenario(c).metrics);
  CHECK(other.str() != a.str());
}
