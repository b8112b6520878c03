#include "fusionnav/robot.hpp"

#include <algorithm>
#include <stdexcept>

#include "fusionnav/random.hpp"

namespace fusionnav {

double rate_limit(double current, double target, double accel, double decel,
                  double dt) {
  if (target > current) return std::min(target, current + accel * dt);
  return std::max(target, current - decel * dt);
}

StepOutcome step_world(World& world, RobotState& robot,
                       const VelocityCommand& cmd, double dt,
                       const RobotLimits& limits) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  robot.commanded = cmd;
  const double v_target = std::clamp(cmd.v, limits.v_min, limits.v_max);
  const double w_target = std::clamp(cmd.w, limits.w_min, limits.w_max);
  robot.actual.v =
      rate_limit(robot.actual.v, v_target, limits.acc_v, limits.dec_v, dt);
  robot.actual.w =
      rate_limit(robot.actual.w, w_target, limits.acc_w, limits.dec_w, dt);
  robot.ground_truth = step_kinematics(robot.ground_truth, robot.actual, dt);
  world.advance(dt);

  StepOutcome out;
  out.clearance = world.clearance(robot.ground_truth.position());
  out.collided = out.clearance < robot.radius;
  return out;
}

Pose2D localize(const Pose2D& ground_truth, const LocalizationNoise& noise,
                std::uint64_t seed, std::uint64_t tick) {
  if (!(noise.position_sigma >= 0.0 && noise.heading_sigma >= 0.0)) {
    throw std::invalid_argument("localization noise must be non-negative");
  }
  Rng rng(seed, Stream::Localization, tick);
  const double dx = rng.normal(noise.position_sigma);
  const double dy = rng.normal(noise.position_sigma);
  const double dth = rng.normal(noise.heading_sigma);
  return {ground_truth.x() + dx, ground_truth.y() + dy,
          ground_truth.theta() + dth};
}

}  // namespace fusionnav
