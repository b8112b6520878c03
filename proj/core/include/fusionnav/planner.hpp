/*
 * planner.hpp
 *
 * Dynamic window approach over the inflated fusion map.
 *
 * Candidate commands are sampled uniformly over the window reachable within
 * one control period, filtered by the stopping-distance admissibility test,
 * and scored by
 *
 *   G(v, w) = alpha * heading + beta * dist + gamma * vel
 *
 * with every term normalized into [0, 1]. The robot is treated as a point
 * against a map inflated by the expanded radius r_e.
 */

#ifndef FUSIONNAV_PLANNER_HPP
#define FUSIONNAV_PLANNER_HPP

#include <cstddef>
#include <limits>

#include "fusionnav/costmap.hpp"
#include "fusionnav/geometry.hpp"

namespace fusionnav {

struct RobotLimits {
  double v_min = 0.0;   ///< [m/s]
  double v_max = 0.5;   ///< [m/s]
  double w_min = -1.0;  ///< [rad/s]
  double w_max = 1.0;   ///< [rad/s]
  double acc_v = 0.5;   ///< [m/s^2]
  double dec_v = 0.5;   ///< [m/s^2]
  double acc_w = 1.5;   ///< [rad/s^2]
  double dec_w = 1.5;   ///< [rad/s^2]

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct DwaConfig {
  double alpha = 1.0;
  double beta = 0.2;
  double gamma = 0.2;
  double dt = 0.1;       ///< control period [s]
  double horizon = 2.0;  ///< rollout length [s]
  int v_samples = 21;
  int w_samples = 41;
  double expanded_radius = 0.3;  ///< r_e [m]

  void validate() const;
};

struct VelocityCommand {
  double v = 0.0;  ///< [m/s]
  double w = 0.0;  ///< [rad/s]
  friend bool operator==(const VelocityCommand&, const VelocityCommand&) = default;
};

struct WindowBounds {
  double v_lo = 0.0;
  double v_hi = 0.0;
  double w_lo = 0.0;
  double w_hi = 0.0;

  [[nodiscard]] bool empty() const { return v_lo > v_hi || w_lo > w_hi; }
  [[nodiscard]] bool contains(const VelocityCommand& c) const {
    return c.v >= v_lo && c.v <= v_hi && c.w >= w_lo && c.w <= w_hi;
  }
};

/// Stand-in for an unobstructed rollout in scoring and admissibility [m].
inline constexpr double kDistCap = 10.0;

/// One Euler step of the unicycle model.
[[nodiscard]] Pose2D step_kinematics(const Pose2D& pose,
                                     const VelocityCommand& cmd, double dt);

/// Pose after following the constant-(v, w) arc for `t` seconds (exact).
[[nodiscard]] Pose2D arc_pose(const Pose2D& start, const VelocityCommand& cmd,
                              double t);

/// Velocity limits intersected with what is reachable in one period dt.
[[nodiscard]] WindowBounds dynamic_window(const VelocityCommand& current,
                                          const RobotLimits& limits, double dt);

/**
 * @brief Arc length travelled along the (v, w) arc before the robot center
 *        enters an inflated cell.
 *
 * The arc is sampled every resolution/2 of arc length up to the horizon.
 * Returns 0 when the start is already inside an inflated cell and +inf when
 * the arc stays clear. Commands with v = 0 only check the start cell.
 */
[[nodiscard]] double rollout_distance_to_collision(const Pose2D& pose,
                                                   const VelocityCommand& cmd,
                                                   const InflatedMap& map,
                                                   double horizon);

/// Stopping-distance test: v <= sqrt(2 dis dec_v) and |w| <= sqrt(2 dis dec_w).
[[nodiscard]] bool admissible(const VelocityCommand& cmd, double dis,
                              const RobotLimits& limits);

/// 1 - theta/pi where theta is the bearing error from the end pose to goal.
[[nodiscard]] double heading_score(const Pose2D& end_pose, const Vec2& goal);
/// min(d_o / r, 1).
[[nodiscard]] double dist_score(double d_o, double r);
/// v / v_max.
[[nodiscard]] double vel_score(double v, double v_max);

struct PlannerState {
  Pose2D pose;
  VelocityCommand current;
};

struct SelectionDiagnostics {
  WindowBounds window;
  std::size_t candidates = 0;
  std::size_t admissible = 0;
  bool emergency = false;
  double heading = 0.0;
  double dist = 0.0;
  double vel = 0.0;
  double distance_to_collision = std::numeric_limits<double>::infinity();
  std::size_t sample_index = 0;
};

struct Selection {
  VelocityCommand best;
  double score = 0.0;
  SelectionDiagnostics diagnostics;
};

/**
 * @brief Picks the admissible sampled command with the highest G.
 *
 * Ties go to higher v, then smaller |w|, then the lower sample index
 * (v-major order). When nothing is admissible the emergency command (0, 0)
 * is returned with diagnostics.emergency set.
 */
[[nodiscard]] Selection select_velocity(const PlannerState& state,
                                        const Vec2& goal,
                                        const InflatedMap& map,
                                        const RobotLimits& limits,
                                        const DwaConfig& config);

/// Sample i of n spread uniformly over [lo, hi] (both ends included).
[[nodiscard]] double window_sample(double lo, double hi, int i, int n);

}  // namespace fusionnav

#endif  // FUSIONNAV_PLANNER_HPP
