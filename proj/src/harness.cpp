#include "televiz/harness.hpp"

#include "televiz/lag.hpp"
#include "televiz/smoothing.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <ostream>

namespace televiz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void put_double(std::ostream& os, double v) {
  if (std::isnan(v)) {
    os << "nan";
    return;
  }
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  os.write(buf.data(), res.ptr - buf.data());
}

nlohmann::json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double mean_of(std::span<const MetricsRow> rows, double MetricsRow::*field) {
  if (rows.empty()) return kNaN;
  double sum = 0.0;
  for (const MetricsRow& r : rows) sum += r.*field;
  return sum / static_cast<double>(rows.size());
}

}  // namespace

Summary summarize(const Engine& engine) {
  const ScenarioConfig& c = engine.config();
  const std::vector<MetricsRow>& rows = engine.rows();
  Summary s;
  s.name = c.name;
  s.mode = c.mode;
  s.seed = c.seed;
  s.ticks = static_cast<std::int64_t>(rows.size());
  s.mesh_cells = engine.mesh().size();

  try {
    s.head_latency_s = measure_head_latency(engine.operator_yaw_trace(), engine.robot_yaw_trace(),
                                            c.period(), c.metrics.lag_max_s);
  } catch (const DegenerateSignal&) {
    s.head_latency_s = kNaN;
  }

  double lag_sum = 0.0;
  std::size_t lag_n = 0;
  s.peak_lag_s = kNaN;
  double episode_sum = 0.0;
  std::size_t episode_n = 0;
  const auto& episode = c.network.instability;
  for (const MetricsRow& r : rows) {
    if (std::isnan(r.lag_s)) continue;
    lag_sum += r.lag_s;
    ++lag_n;
    if (std::isnan(s.peak_lag_s) || r.lag_s > s.peak_lag_s) s.peak_lag_s = r.lag_s;
    // Only windows lying entirely inside the settled part of the episode.
    if (episode && r.time >= episode->start + episode->extra_delay + c.metrics.lag_window_s &&
        r.time < episode->start + episode->duration) {
      episode_sum += r.lag_s;
      ++episode_n;
    }
  }
  s.mean_lag_s = lag_n > 0 ? lag_sum / static_cast<double>(lag_n) : kNaN;
  s.episode_lag_s = episode_n > 0 ? episode_sum / static_cast<double>(episode_n) : kNaN;

  const auto tail_ticks = static_cast<std::size_t>(std::llround(c.metrics.steady_window_s / c.period()));
  const std::size_t tail = std::min(rows.size(), std::max<std::size_t>(1, tail_ticks));
  s.steady_state_gap_deg = mean_of(std::span(rows).last(tail), &MetricsRow::gap_deg);

  s.mean_live = mean_of(rows, &MetricsRow::live_fraction);
  s.mean_mesh = mean_of(rows, &MetricsRow::mesh_fraction);
  s.mean_blank = mean_of(rows, &MetricsRow::blank_fraction);
  s.final_residual = rows.empty() ? kNaN : rows.back().calibration_residual;
  s.max_residual = 0.0;
  for (const MetricsRow& r : rows) s.max_residual = std::max(s.max_residual, r.calibration_residual);
  return s;
}

RunResult run_scenario(const ScenarioConfig& config) {
  Engine engine(config);
  while (!engine.done()) engine.step();
  RunResult result;
  result.summary = summarize(engine);
  result.metrics = engine.rows();
  return result;
}

void write_metrics_csv(std::ostream& os, std::span<const MetricsRow> rows) {
  os << "time_s,operator_yaw_deg,operator_pitch_deg,robot_yaw_deg,robot_pitch_deg,lag_s,"
        "live_fraction,mesh_fraction,blank_fraction,calibration_residual,gap_deg\n";
  for (const MetricsRow& r : rows) {
    const std::array<double, 11> cols{r.time,          r.operator_yaw_deg, r.operator_pitch_deg,
                                      r.robot_yaw_deg, r.robot_pitch_deg,  r.lag_s,
                                      r.live_fraction, r.mesh_fraction,    r.blank_fraction,
                                      r.calibration_residual, r.gap_deg};
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i > 0) os << ',';
      put_double(os, cols[i]);
    }
    os << '\n';
  }
}

nlohmann::json summary_json(const Summary& s) {
  return {
      {"name", s.name},
      {"mode", to_string(s.mode)},
      {"seed", s.seed},
      {"ticks", s.ticks},
      {"head_latency_s", number_or_null(s.head_latency_s)},
      {"mean_lag_s", number_or_null(s.mean_lag_s)},
      {"peak_lag_s", number_or_null(s.peak_lag_s)},
      {"episode_lag_s", number_or_null(s.episode_lag_s)},
      {"steady_state_gap_deg", number_or_null(s.steady_state_gap_deg)},
      {"mean_live_fraction", number_or_null(s.mean_live)},
      {"mean_mesh_fraction", number_or_null(s.mean_mesh)},
      {"mean_blank_fraction", number_or_null(s.mean_blank)},
      {"final_calibration_residual", number_or_null(s.final_residual)},
      {"max_calibration_residual", number_or_null(s.max_residual)},
      {"mesh_cells", s.mesh_cells},
  };
}

std::vector<ModeResult> compare_modes(const ScenarioConfig& base) {
  constexpr std::array modes{ViewMode::FixedRGB, ViewMode::Decoupled, ViewMode::DecoupledWithMesh};
  std::vector<std::future<Summary>> jobs;
  for (ViewMode m : modes) {
    ScenarioConfig c = base;
    c.mode = m;
    jobs.push_back(std::async(std::launch::async,
                              [c = std::move(c)] { return run_scenario(c).summary; }));
  }
  std::vector<ModeResult> out;
  for (std::size_t i = 0; i < modes.size(); ++i) out.push_back({modes[i], jobs[i].get()});
  return out;
}

void write_comparison(std::ostream& os, std::span<const ModeResult> results) {
  os << "mode,mean_live_fraction,mean_mesh_fraction,mean_blank_fraction\n";
  for (const ModeResult& r : results) {
    os << to_string(r.mode) << ',';
    put_double(os, r.summary.mean_live);
    os << ',';
    put_double(os, r.summary.mean_mesh);
    os << ',';
    put_double(os, r.summary.mean_blank);
    os << '\n';
  }
}

std::vector<FilterLagPoint> sweep_filter(const ScenarioConfig& config,
                                         std::span<const double> rates) {
  HeadSweep sweep;
  if (config.operator_.sweep) sweep = *config.operator_.sweep;
  const double period = config.period();
  const std::int64_t n = std::max<std::int64_t>(config.tick_count(),
                                                std::llround(2.0 * sweep.period_s / period));
  std::vector<Pose> signal;
  signal.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * period;
    const double yaw =
        sweep.center_deg + sweep.amplitude_deg * std::sin(2.0 * std::numbers::pi * t / sweep.period_s);
    signal.push_back(Pose::from_rotation(rotation_z(deg2rad(yaw))));
  }
  std::vector<FilterLagPoint> out;
  for (double rate : rates) {
    out.push_back({rate, 1000.0 * measure_filter_lag(rate, period, signal)});
  }
  return out;
}

void write_filter_sweep_csv(std::ostream& os, std::span<const FilterLagPoint> points) {
  os << "rate,lag_ms\n";
  for (const FilterLagPoint& p : points) {
    put_double(os, p.rate);
    os << ',';
    put_double(os, p.lag_ms);
    os << '\n';
  }
}

namespace presets {

namespace {

ScriptEvent event_at(double t, EventType type) {
  ScriptEvent e;
  e.t = t;
  e.type = type;
  return e;
}

ScenarioConfig base(std::string name, double duration) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.duration_s = duration;
  c.events.push_back(event_at(0.0, EventType::Calibrate));
  return c;
}

}  // namespace

ScenarioConfig latency_sweep() {
  ScenarioConfig c = base("latency_sweep", 30.0);
  c.operator_.sweep = HeadSweep{0.0, 30.0, 75.0, 6.0, 0.0};
  return c;
}

ScenarioConfig instability() {
  ScenarioConfig c = base("instability", 40.0);
  c.operator_.sweep = HeadSweep{0.0, 40.0, 75.0, 6.0, 0.0};
  // 0.5 s nominal plus 1.5 s of congestion on the return path.
  c.network.instability = InstabilityEpisode{15.0, 20.0, 1.5};
  c.network.instability_channel = InstabilityChannel::Feedback;
  return c;
}

ScenarioConfig range_of_motion(ViewMode mode) {
  ScenarioConfig c = base("range_of_motion", 15.0);
  c.mode = mode;
  c.operator_.keyframes = {{0.0, 0.0}, {1.0, 0.0}, {3.0, 75.0}, {8.0, 75.0}, {10.0, -75.0}, {15.0, -75.0}};
  if (mode == ViewMode::DecoupledWithMesh) c.mesh.prescan = Prescan::Full;
  return c;
}

ScenarioConfig head_turn(std::uint64_t seed) {
  ScenarioConfig c = base("head_turn", 20.0);
  c.seed = seed;
  c.network.jitter_stddev_s = 0.02;
  c.operator_.sweep = HeadSweep{0.5, 8.0, 50.0, 8.0, 0.0};
  c.operator_.keyframes = {{0.0, 0.0},    {9.0, 0.0},    {9.5, 70.0},  {12.0, 70.0}, {12.5, 0.0},
                           {14.0, 0.0},   {14.5, -70.0}, {17.0, -70.0}, {17.5, 0.0}};
  c.events.push_back(event_at(0.5, EventType::ScanStart));
  c.events.push_back(event_at(8.5, EventType::ScanStop));
  return c;
}

ScenarioConfig turn_beyond_scanned() {
  ScenarioConfig c = base("turn_beyond_scanned", 14.0);
  c.mode = ViewMode::DecoupledWithMesh;
  c.operator_.sweep = HeadSweep{0.5, 6.0, 15.0, 6.0, 0.0};
  c.operator_.keyframes = {{0.0, 0.0}, {7.0, 0.0}, {9.0, 75.0}, {14.0, 75.0}};
  c.events.push_back(event_at(0.5, EventType::ScanStart));
  c.events.push_back(event_at(6.5, EventType::ScanStop));
  return c;
}

ScenarioConfig static_aligned(ViewMode mode) {
  ScenarioConfig c = base("static_aligned", 2.0);
  c.mode = mode;
  c.hmd.horizontal_fov_deg = c.camera.horizontal_fov_deg;
  c.hmd.vertical_fov_deg = c.camera.vertical_fov_deg;
  c.mesh.prescan = Prescan::Full;
  return c;
}

ScenarioConfig zero_delay_fixed() {
  ScenarioConfig c = base("zero_delay_fixed", 12.0);
  c.mode = ViewMode::FixedRGB;
  c.network.command_delay_s = 0.0;
  c.network.feedback_delay_s = 0.0;
  c.neck.time_constant_s = 0.0;
  c.neck.max_velocity_deg_s = 0.0;
  // Camera on the neck axis so the HMD and ZED rotate about the same point.
  c.neck.zed_offset = Vec3::Zero();
  c.hmd.horizontal_fov_deg = c.camera.horizontal_fov_deg;
  c.hmd.vertical_fov_deg = c.camera.vertical_fov_deg;
  c.operator_.sweep = HeadSweep{0.0, 12.0, 40.0, 6.0, 0.0};
  return c;
}

std::vector<std::string_view> names() {
  return {"latency_sweep", "instability",    "range_of_motion",     "range_of_motion_mesh",
          "head_turn",     "turn_beyond_scanned", "static_aligned", "zero_delay_fixed"};
}

std::optional<ScenarioConfig> by_name(std::string_view name) {
  if (name == "latency_sweep") return latency_sweep();
  if (name == "instability") return instability();
  if (name == "range_of_motion") return range_of_motion();
  if (name == "range_of_motion_mesh") {
    ScenarioConfig c = range_of_motion(ViewMode::DecoupledWithMesh);
    c.name = "range_of_motion_mesh";
    return c;
  }
  if (name == "head_turn") return head_turn();
  if (name == "turn_beyond_scanned") return turn_beyond_scanned();
  if (name == "static_aligned") return static_aligned();
  if (name == "zero_delay_fixed") return zero_delay_fixed();
  return std::nullopt;
}

}  // namespace presets

}  // namespace televiz
