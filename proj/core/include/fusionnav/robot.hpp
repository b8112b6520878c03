#ifndef FUSIONNAV_ROBOT_HPP
#define FUSIONNAV_ROBOT_HPP

#include <cstdint>

#include "fusionnav/geometry.hpp"
#include "fusionnav/planner.hpp"
#include "fusionnav/world.hpp"

namespace fusionnav {

struct RobotState {
  Pose2D ground_truth;
  VelocityCommand commanded;
  VelocityCommand actual;
  double radius = 0.2;  ///< [m]
};

struct StepOutcome {
  double clearance = 0.0;  ///< ground-truth clearance after the step [m]
  bool collided = false;
};

/// Moves `current` toward `target`, rising at most accel*dt and falling at
/// most decel*dt.
[[nodiscard]] double rate_limit(double current, double target, double accel,
                                double decel, double dt);

/**
 * @brief Advances the simulation by one period.
 *
 * The command is clamped to the velocity limits and tracked under the
 * acceleration limits; the pose integrates the tracked velocity; people
 * walk; the robot collides when its center comes within its radius of a
 * wall cell or obstacle footprint.
 */
StepOutcome step_world(World& world, RobotState& robot,
                       const VelocityCommand& cmd, double dt,
                       const RobotLimits& limits);

struct LocalizationNoise {
  double position_sigma = 0.03;  ///< per axis [m]
  double heading_sigma = 0.01;   ///< [rad]
};

/// Ground truth plus zero-mean Gaussian noise; reproducible per (seed, tick).
[[nodiscard]] Pose2D localize(const Pose2D& ground_truth,
                              const LocalizationNoise& noise,
                              std::uint64_t seed, std::uint64_t tick);

}  // namespace fusionnav

#endif  // FUSIONNAV_ROBOT_HPP
