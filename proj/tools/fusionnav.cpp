// fusionnav: run, compare and validate navigation scenarios.
//
// Exit status: 0 goal reached, 2 collision, 3 timeout, 1 any error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "fusionnav/calibration.hpp"
#include "fusionnav/runner.hpp"
#include "fusionnav/scenario.hpp"

namespace fs = std::filesystem;
using namespace fusionnav;

namespace {

constexpr int kErrorExit = 1;

struct Common {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string map;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario, "Scenario YAML file")->required();
  cmd->add_option("--seed", c.seed, "Override the scenario seed");
  cmd->add_option("--map", c.map, "Override the static map file");
}

Scenario load(const Common& c) {
  Scenario sc = load_scenario(c.scenario);
  if (c.seed) sc.seed = *c.seed;
  if (!c.map.empty()) {
    sc.map_path = c.map;
    sc.static_map = load_static_map(c.map);
    if (auto v = validate_scenario(sc); !v.empty()) throw ScenarioError(std::move(v));
  }
  return sc;
}

void print_summary(const ScenarioResult& r) {
  std::printf("%s [%s] seed=%llu: %s after %.1f s, path %.2f m, min clearance %.3f m\n",
              r.scenario.c_str(), std::string(to_string(r.mode)).c_str(),
              static_cast<unsigned long long>(r.seed),
              std::string(to_string(r.termination)).c_str(), r.metrics.duration,
              r.metrics.path_length, r.metrics.min_clearance);
}

int cmd_run(const Common& c, const std::string& mode) {
  Scenario sc = load(c);
  if (!mode.empty()) sc.mode = parse_fusion_mode(mode);
  const ScenarioResult r = run_scenario(sc);
  if (!c.out.empty()) emit_outputs(r, OutputPaths::in(c.out));
  print_summary(r);
  return exit_code(r);
}

int cmd_compare(const Common& c) {
  const Scenario sc = load(c);
  const ModeComparison cmp = compare_modes(sc);
  if (!c.out.empty()) {
    const fs::path dir(c.out);
    emit_outputs(cmp.lidar, OutputPaths::in(dir / "lidar"));
    emit_outputs(cmp.fusion, OutputPaths::in(dir / "fusion"));
    std::ofstream report(dir / "compare.txt");
    if (!report) throw std::runtime_error((dir / "compare.txt").string() + ": cannot open");
    write_comparison(report, cmp);
  }
  print_summary(cmp.lidar);
  print_summary(cmp.fusion);
  write_comparison(std::cout, cmp);
  return exit_code(cmp.fusion);
}

int cmd_validate(const Common& c) {
  const Scenario sc = load(c);
  std::printf("%s: ok (%d x %d cells, %zu obstacles)\n", sc.name.c_str(),
              sc.static_map.spec().width, sc.static_map.spec().height, sc.obstacles.size());
  return 0;
}

int cmd_calibrate(const std::string& markers) {
  std::ifstream in(markers);
  if (!in) throw std::runtime_error("cannot open marker log " + markers);
  const auto records = read_marker_log(in);
  const auto pairs = pair_by_index(records, CameraId::Cam1, CameraId::Cam2);
  const ExtrinsicEstimate est = estimate_extrinsic(pairs);
  const Mat3& r = est.transform.rotation();
  const Vec3& t = est.transform.translation();
  std::printf("cam2_from_cam1 from %zu pairs\n", est.sample_count);
  for (int i = 0; i < 3; ++i) {
    std::printf("  % .9f % .9f % .9f   % .9f\n", r(i, 0), r(i, 1), r(i, 2), t(i));
  }
  std::printf("rotation residual %.6f deg, translation residual %.6f m\n",
              est.rotation_residual * 180.0 / std::numbers::pi, est.translation_residual);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera/LiDAR fusion navigation simulator"};
  app.require_subcommand(1);

  Common run_opts;
  std::string mode;
  auto* run = app.add_subcommand("run", "Run one scenario");
  add_common(run, run_opts);
  run->add_option("--out", run_opts.out, "Output directory");
  run->add_option("--mode", mode, "Sensor mode")
      ->check(CLI::IsMember({"lidar", "fusion"}));

  Common cmp_opts;
  auto* compare = app.add_subcommand("compare", "Run lidar-only and fusion with one seed");
  add_common(compare, cmp_opts);
  compare->add_option("--out", cmp_opts.out, "Output directory");

  Common val_opts;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  add_common(validate, val_opts);

  std::string markers;
  auto* calibrate = app.add_subcommand("calibrate", "Estimate cam2_from_cam1 from a marker log");
  calibrate->add_option("--markers", markers, "Marker log file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kErrorExit;
  }

  try {
    if (*run) return cmd_run(run_opts, mode);
    if (*compare) return cmd_compare(cmp_opts);
    if (*validate) return cmd_validate(val_opts);
    if (*calibrate) return cmd_calibrate(markers);
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kErrorExit;
  }
  return kErrorExit;
}
