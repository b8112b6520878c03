/*
 * scenario.hpp
 *
 * Scenario description and its YAML file format. See
 * scenarios/README.md for the annotated schema.
 */

#ifndef FUSIONNAV_SCENARIO_HPP
#define FUSIONNAV_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusionnav/calibration.hpp"
#include "fusionnav/costmap.hpp"
#include "fusionnav/planner.hpp"
#include "fusionnav/projection.hpp"
#include "fusionnav/robot.hpp"
#include "fusionnav/sensors.hpp"
#include "fusionnav/world.hpp"

namespace fusionnav {

enum class FusionMode { LidarOnly, Fusion };

[[nodiscard]] std::string_view to_string(FusionMode mode);
/// Accepts "lidar" / "fusion". Throws std::invalid_argument.
[[nodiscard]] FusionMode parse_fusion_mode(std::string_view token);

struct CalibrationConfig {
  std::size_t samples = 100;
  ObservationNoise noise{deg_to_rad(0.5), 0.005};
  /// Optional marker log; when set it replaces synthetic observations.
  std::filesystem::path marker_log;
};

struct FusionConfig {
  ZBand z_band;
  double camera_bin = deg_to_rad(0.25);  ///< pseudo-scan bin width [rad]
  MarkingParams marking;
};

struct Scenario {
  std::string name;
  std::filesystem::path map_path;
  StaticLayer static_map{GridSpec{}};
  std::vector<Obstacle> obstacles;

  Pose2D start;
  Vec2 goal = Vec2::Zero();
  double robot_radius = 0.2;
  double goal_tolerance = 0.2;
  RobotLimits limits;

  LidarModel lidar;
  CameraModel camera_left;
  CameraModel camera_right;
  LocalizationNoise localization;
  CalibrationConfig calibration;

  DwaConfig planner;
  FusionConfig fusion;

  FusionMode mode = FusionMode::Fusion;
  std::uint64_t seed = 1;
  double max_duration = 120.0;  ///< [s]
};

/// Thrown when a scenario is structurally valid YAML but violates
/// invariants; carries every violation found.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> violations);
  [[nodiscard]] const std::vector<std::string>& violations() const {
    return violations_;
  }

 private:
  std::vector<std::string> violations_;
};

/// Every invariant violation, empty when the scenario is runnable.
[[nodiscard]] std::vector<std::string> validate_scenario(const Scenario& s);

/// Parses YAML text. Relative map paths resolve against `base_dir`.
/// Throws ScenarioError listing problems.
[[nodiscard]] Scenario parse_scenario(const std::string& yaml_text,
                                      const std::filesystem::path& base_dir);

[[nodiscard]] Scenario load_scenario(const std::filesystem::path& file);

/// Loads a static map file. Throws std::runtime_error naming the path.
[[nodiscard]] StaticLayer load_static_map(const std::filesystem::path& file);

}  // namespace fusionnav

#endif  // FUSIONNAV_SCENARIO_HPP
