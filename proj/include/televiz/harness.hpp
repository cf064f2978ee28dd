#pragma once

#include "televiz/engine.hpp"
#include "televiz/scenario.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace televiz {

/// NaN fields mean "not measurable on this run" and serialize as null.
struct Summary {
  std::string name;
  ViewMode mode = ViewMode::Decoupled;
  std::uint64_t seed = 0;
  std::int64_t ticks = 0;
  double head_latency_s = 0.0;  // whole-run cross-correlation
  double mean_lag_s = 0.0;      // mean of the windowed per-row lag
  double peak_lag_s = 0.0;
  double episode_lag_s = 0.0;   // windowed lag inside the instability episode
  double steady_state_gap_deg = 0.0;
  double mean_live = 0.0;
  double mean_mesh = 0.0;
  double mean_blank = 0.0;
  double final_residual = 0.0;
  double max_residual = 0.0;
  std::size_t mesh_cells = 0;
};

struct RunResult {
  std::vector<MetricsRow> metrics;
  Summary summary;
};

RunResult run_scenario(const ScenarioConfig& config);

/// Engine state after the last tick plus the summary of its rows.
Summary summarize(const Engine& engine);

void write_metrics_csv(std::ostream& os, std::span<const MetricsRow> rows);
nlohmann::json summary_json(const Summary& s);

struct ModeResult {
  ViewMode mode;
  Summary summary;
};

/// Runs FixedRGB, Decoupled and DecoupledWithMesh on the same script, one
/// thread each. The base config's mode is ignored.
std::vector<ModeResult> compare_modes(const ScenarioConfig& base);
void write_comparison(std::ostream& os, std::span<const ModeResult> results);

struct FilterLagPoint {
  double rate = 0.0;
  double lag_ms = 0.0;
};

/// Filter lag per rate on the config's yaw sweep (75 deg, 6 s when the
/// config has none) sampled at its tick rate.
std::vector<FilterLagPoint> sweep_filter(const ScenarioConfig& config,
                                         std::span<const double> rates);
void write_filter_sweep_csv(std::ostream& os, std::span<const FilterLagPoint> points);

namespace presets {

ScenarioConfig latency_sweep();
ScenarioConfig instability();
ScenarioConfig range_of_motion(ViewMode mode = ViewMode::Decoupled);
ScenarioConfig head_turn(std::uint64_t seed = 1);
ScenarioConfig turn_beyond_scanned();
ScenarioConfig static_aligned(ViewMode mode = ViewMode::Decoupled);
ScenarioConfig zero_delay_fixed();

std::vector<std::string_view> names();
std::optional<ScenarioConfig> by_name(std::string_view name);

}  // namespace presets

}  // namespace televiz
