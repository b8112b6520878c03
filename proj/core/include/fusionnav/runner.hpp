/*
 * runner.hpp
 *
 * Closed-loop scenario execution and its file outputs.
 */

#ifndef FUSIONNAV_RUNNER_HPP
#define FUSIONNAV_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fusionnav/calibration.hpp"
#include "fusionnav/costmap.hpp"
#include "fusionnav/scenario.hpp"

namespace fusionnav {

/// One control period. Poses, clearance and command all refer to time t;
/// the command is what was sent for the following period.
struct TickRecord {
  double t = 0.0;
  Pose2D ground_truth;
  Pose2D estimate;
  VelocityCommand command;
  double clearance = 0.0;       ///< to walls and obstacle footprints [m]
  double seat_clearance = 0.0;  ///< to chair seat footprints only [m]
};

enum class Termination { GoalReached, Collided, TimedOut };

[[nodiscard]] std::string_view to_string(Termination t);

struct RunMetrics {
  std::size_t ticks = 0;
  double path_length = 0.0;  ///< ground truth [m]
  double duration = 0.0;     ///< [s]
  double mean_position_error = 0.0;
  double max_position_error = 0.0;
  double mean_abs_error_x = 0.0;
  double mean_abs_error_y = 0.0;
  double min_clearance = 0.0;
  double min_seat_clearance = 0.0;
  double final_goal_distance = 0.0;
};

struct ScenarioResult {
  std::string scenario;
  FusionMode mode = FusionMode::Fusion;
  std::uint64_t seed = 0;
  Pose2D start;
  Vec2 goal = Vec2::Zero();
  double robot_radius = 0.0;

  std::vector<TickRecord> ticks;
  Termination termination = Termination::TimedOut;
  RunMetrics metrics;
  ExtrinsicEstimate calibration;  ///< estimated cam2_from_cam1

  MultiLayerMap map{StaticLayer{GridSpec{}}};  ///< costmap at termination
  std::vector<Obstacle> obstacles;              ///< world state at termination

  [[nodiscard]] bool goal_reached() const {
    return termination == Termination::GoalReached;
  }
  [[nodiscard]] bool collided() const {
    return termination == Termination::Collided;
  }
  [[nodiscard]] bool timed_out() const {
    return termination == Termination::TimedOut;
  }
};

/// Distance from p to the nearest chair seat footprint, capped at
/// kClearanceSearchRadius.
[[nodiscard]] double seat_clearance(const std::vector<Obstacle>& obstacles,
                                    const Vec2& p);

/**
 * @brief Runs the sense, fuse, plan, act loop until a terminal condition.
 *
 * Each tick checks collision, then goal, then timeout against ground
 * truth; a terminal tick is recorded with a zero command and the loop
 * stops. Otherwise the tick senses, updates the costmap, plans on the
 * estimated pose and steps the world. Throws ScenarioError for invalid
 * scenarios.
 */
[[nodiscard]] ScenarioResult run_scenario(const Scenario& scenario);

/// Process exit status for a run: 0 goal, 2 collision, 3 timeout.
[[nodiscard]] int exit_code(const ScenarioResult& result);

struct OutputPaths {
  std::filesystem::path trajectory;
  std::filesystem::path metrics;
  std::filesystem::path plot;

  /// trajectory.csv, metrics.txt and plot.svg inside `dir`.
  [[nodiscard]] static OutputPaths in(const std::filesystem::path& dir);
};

void write_trajectory(std::ostream& out, const ScenarioResult& result);
void write_metrics(std::ostream& out, const ScenarioResult& result);
void write_plot_svg(std::ostream& out, const ScenarioResult& result);

/// Writes all three files, creating parent directories. Throws
/// std::runtime_error naming the path on I/O failure.
void emit_outputs(const ScenarioResult& result, const OutputPaths& paths);

struct MetricDelta {
  std::string name;
  double lidar = 0.0;
  double fusion = 0.0;
  [[nodiscard]] double delta() const { return fusion - lidar; }
};

struct ModeComparison {
  ScenarioResult lidar;
  ScenarioResult fusion;
  std::vector<MetricDelta> deltas;
  bool fusion_safe = false;   ///< goal reached without collision
  bool lidar_unsafe = false;  ///< seat-clearance violation or collision
  std::string verdict;
};

/// Runs the scenario in both modes with the same seed.
[[nodiscard]] ModeComparison compare_modes(const Scenario& scenario);

void write_comparison(std::ostream& out, const ModeComparison& comparison);

}  // namespace fusionnav

#endif  // FUSIONNAV_RUNNER_HPP
