// televiz command-line front end.
#include "televiz/harness.hpp"
#include "televiz/serve.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace televiz;

namespace {

void init_logging() {
  // stdout carries CSV and JSON output.
  spdlog::set_default_logger(spdlog::stderr_color_mt("televiz"));
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("TELEVIZ_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honor it when asked for.
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
    else spdlog::warn("unknown TELEVIZ_LOG level '{}'", env);
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

int cmd_run(const std::string& scenario, const fs::path& out_dir, std::optional<std::uint64_t> seed,
            const std::string& ply) {
  ScenarioConfig config = load_scenario(scenario);
  if (seed) config.seed = *seed;
  spdlog::info("running '{}' ({} s at {} Hz, mode {})", config.name, config.duration_s,
               config.tick_rate_hz, to_string(config.mode));
  Engine engine(config);
  PointCloudFrame last_points;
  while (!engine.done()) {
    engine.step();
    if (!ply.empty() && !engine.last_frame().points.empty()) last_points = engine.last_frame();
  }
  const Summary summary = summarize(engine);
  fs::create_directories(out_dir);
  {
    auto os = open_out(out_dir / "metrics.csv");
    write_metrics_csv(os, engine.rows());
  }
  {
    auto os = open_out(out_dir / "summary.json");
    os << summary_json(summary).dump(2) << '\n';
  }
  if (!ply.empty()) {
    if (last_points.points.empty()) spdlog::warn("no point cloud was captured; {} is empty", ply);
    auto os = open_out(ply);
    write_ply(os, last_points);
  }
  std::cout << summary_json(summary).dump(2) << '\n';
  return 0;
}

int cmd_compare(const std::string& scenario, std::optional<std::uint64_t> seed) {
  ScenarioConfig config = load_scenario(scenario);
  if (seed) config.seed = *seed;
  const auto results = compare_modes(config);
  write_comparison(std::cout, results);
  return 0;
}

int cmd_sweep(const std::string& scenario, const std::vector<double>& rates, const std::string& out) {
  const ScenarioConfig config = load_scenario(scenario);
  const auto points = sweep_filter(config, rates);
  if (out.empty()) {
    write_filter_sweep_csv(std::cout, points);
  } else {
    auto os = open_out(out);
    write_filter_sweep_csv(os, points);
  }
  return 0;
}

Server* g_server = nullptr;

int cmd_serve(const std::string& scenario, const ServeOptions& options) {
  Server server(load_scenario(scenario), options);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  spdlog::info("serving on ws://{}:{}", options.address, server.port());
  server.run();
  g_server = nullptr;
  return 0;
}

int cmd_preset(const std::string& name, bool list, const std::string& out) {
  if (list || name.empty()) {
    for (auto n : presets::names()) std::cout << n << '\n';
    return 0;
  }
  const auto config = presets::by_name(name);
  if (!config) {
    std::cerr << "error: unknown preset '" << name << "'\n";
    return 2;
  }
  if (out.empty()) {
    std::cout << serialize_scenario(*config) << '\n';
  } else {
    auto os = open_out(out);
    os << serialize_scenario(*config) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  CLI::App app{"Decoupled teleoperation viewpoint simulator"};
  app.require_subcommand(1);

  std::string scenario;
  fs::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::string ply;
  auto* run = app.add_subcommand("run", "Run a scenario and write metrics.csv and summary.json");
  run->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--ply", ply, "Also export the last captured point cloud");

  auto* compare = app.add_subcommand("compare", "Run all three view modes and tabulate coverage");
  compare->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  compare->add_option("--seed", seed, "Override the scenario seed");

  std::vector<double> rates{1.0, 0.5, 0.2, 0.1, 0.05};
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep-filter", "Filter lag per low-pass rate");
  sweep->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--rates", rates, "Comma-separated rates in (0, 1]")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--out", sweep_out, "CSV output file (default stdout)");

  ServeOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "Run the live engine behind a websocket");
  serve->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", serve_opts.port, "TCP port")->required();
  serve->add_option("--address", serve_opts.address, "Listen address");
  serve->add_option("--snapshot-rate", serve_opts.snapshot_rate_hz, "Snapshots per second");
  serve->add_option("--speed", serve_opts.speed, "Simulated seconds per wall-clock second");
  serve->add_flag("--loop", serve_opts.loop, "Restart the scenario when it ends");

  std::string preset_name;
  bool preset_list = false;
  std::string preset_out;
  auto* preset = app.add_subcommand("preset", "Print a built-in scenario as a scenario file");
  preset->add_option("name", preset_name, "Preset name");
  preset->add_flag("--list", preset_list, "List preset names");
  preset->add_option("--out", preset_out, "Write to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, out_dir, seed, ply);
    if (*compare) return cmd_compare(scenario, seed);
    if (*sweep) return cmd_sweep(scenario, rates, sweep_out);
    if (*serve) return cmd_serve(scenario, serve_opts);
    if (*preset) return cmd_preset(preset_name, preset_list, preset_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
