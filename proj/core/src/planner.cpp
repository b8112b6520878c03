#include "fusionnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fusionnav {

namespace {

constexpr double kStraightArc = 1e-12;

struct Ranked {
  double score;
  double v;
  double abs_w;
  std::size_t index;
};

// Strict "a beats b" under the documented tie-break order.
bool beats(const Ranked& a, const Ranked& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.v != b.v) return a.v > b.v;
  if (a.abs_w != b.abs_w) return a.abs_w < b.abs_w;
  return a.index < b.index;
}

}  // namespace

void RobotLimits::validate() const {
  if (!(v_min <= v_max)) throw std::invalid_argument("v_min must not exceed v_max");
  if (!(w_min <= w_max)) throw std::invalid_argument("w_min must not exceed w_max");
  if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
  if (!(acc_v > 0.0 && dec_v > 0.0 && acc_w > 0.0 && dec_w > 0.0)) {
    throw std::invalid_argument("acceleration limits must be positive");
  }
}

void DwaConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(horizon >= dt)) throw std::invalid_argument("horizon must be at least dt");
  if (v_samples < 2 || w_samples < 2) {
    throw std::invalid_argument("at least 2 samples per axis are required");
  }
  if (!(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0)) {
    throw std::invalid_argument("objective weights must be non-negative");
  }
  if (!(alpha + beta + gamma > 0.0)) {
    throw std::invalid_argument("objective weights must not all be zero");
  }
  if (!(expanded_radius > 0.0)) {
    throw std::invalid_argument("expanded radius must be positive");
  }
}

Pose2D step_kinematics(const Pose2D& pose, const VelocityCommand& cmd,
                       double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  return {pose.x() + cmd.v * dt * std::cos(pose.theta()),
          pose.y() + cmd.v * dt * std::sin(pose.theta()),
          pose.theta() + cmd.w * dt};
}

Pose2D arc_pose(const Pose2D& start, const VelocityCommand& cmd, double t) {
  const double th = start.theta();
  if (std::abs(cmd.w) < kStraightArc) {
    return {start.x() + cmd.v * t * std::cos(th),
            start.y() + cmd.v * t * std::sin(th), th};
  }
  const double th_end = th + cmd.w * t;
  const double radius = cmd.v / cmd.w;
  return {start.x() + radius * (std::sin(th_end) - std::sin(th)),
          start.y() - radius * (std::cos(th_end) - std::cos(th)), th_end};
}

WindowBounds dynamic_window(const VelocityCommand& current,
                            const RobotLimits& limits, double dt) {
  return {std::max(limits.v_min, current.v - limits.dec_v * dt),
          std::min(limits.v_max, current.v + limits.acc_v * dt),
          std::max(limits.w_min, current.w - limits.dec_w * dt),
          std::min(limits.w_max, current.w + limits.acc_w * dt)};
}

double rollout_distance_to_collision(const Pose2D& pose,
                                     const VelocityCommand& cmd,
                                     const InflatedMap& map, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (map.occupied_at(pose.position())) return 0.0;
  const double speed = std::abs(cmd.v);
  if (speed == 0.0) return kInf;

  const double length = speed * horizon;
  const double step = 0.5 * map.spec().resolution;
  const auto samples = static_cast<std::size_t>(std::ceil(length / step));
  for (std::size_t i = 1; i <= samples; ++i) {
    const double s = std::min(static_cast<double>(i) * step, length);
    const Pose2D p = arc_pose(pose, cmd, s / speed);
    if (map.occupied_at(p.position())) return s;
  }
  return kInf;
}

bool admissible(const VelocityCommand& cmd, double dis,
                const RobotLimits& limits) {
  const double d = std::min(dis, kDistCap);
  return cmd.v <= std::sqrt(2.0 * d * limits.dec_v) &&
         std::abs(cmd.w) <= std::sqrt(2.0 * d * limits.dec_w);
}

double heading_score(const Pose2D& end_pose, const Vec2& goal) {
  const Vec2 delta = goal - end_pose.position();
  if (delta.norm() < 1e-9) return 1.0;
  const double bearing = std::atan2(delta.y(), delta.x());
  const double theta = std::abs(normalize_angle(bearing - end_pose.theta()));
  return 1.0 - theta / std::numbers::pi;
}

double dist_score(double d_o, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("expanded radius must be positive");
  return d_o < r ? d_o / r : 1.0;
}

double vel_score(double v, double v_max) {
  if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
  return v / v_max;
}

double window_sample(double lo, double hi, int i, int n) {
  if (i == n - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

Selection select_velocity(const PlannerState& state, const Vec2& goal,
                          const InflatedMap& map, const RobotLimits& limits,
                          const DwaConfig& config) {
  Selection sel;
  auto& diag = sel.diagnostics;
  diag.window = dynamic_window(state.current, limits, config.dt);
  diag.emergency = true;
  if (diag.window.empty()) return sel;

  Ranked best{};
  const auto nv = static_cast<std::size_t>(config.v_samples);
  const auto nw = static_cast<std::size_t>(config.w_samples);
  for (std::size_t i = 0; i < nv; ++i) {
    const double v = window_sample(diag.window.v_lo, diag.window.v_hi,
                                   static_cast<int>(i), config.v_samples);
    for (std::size_t j = 0; j < nw; ++j) {
      const VelocityCommand cmd{
          v, window_sample(diag.window.w_lo, diag.window.w_hi,
                           static_cast<int>(j), config.w_samples)};
      ++diag.candidates;
      const double dis =
          rollout_distance_to_collision(state.pose, cmd, map, config.horizon);
      const double capped = std::min(dis, kDistCap);
      if (!admissible(cmd, capped, limits)) continue;
      ++diag.admissible;

      const double heading =
          heading_score(arc_pose(state.pose, cmd, config.horizon), goal);
      const double dist = dist_score(capped, config.expanded_radius);
      const double vel = vel_score(cmd.v, limits.v_max);
      const double g =
          config.alpha * heading + config.beta * dist + config.gamma * vel;

      const Ranked candidate{g, cmd.v, std::abs(cmd.w), i * nw + j};
      if (diag.emergency || beats(candidate, best)) {
        best = candidate;
        diag.emergency = false;
        sel.best = cmd;
        sel.score = g;
        diag.heading = heading;
        diag.dist = dist;
        diag.vel = vel;
        diag.distance_to_collision = dis;
        diag.sample_index = candidate.index;
      }
    }
  }
  return sel;
}

}  // namespace fusionnav
