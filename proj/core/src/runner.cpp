#include "fusionnav/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <optional>

#include "fusionnav/projection.hpp"
#include "fusionnav/robot.hpp"
#include "fusionnav/sensors.hpp"

namespace fusionnav {

namespace {

// Half-width of the camera pseudo-scan. Covers both outward-yawed
// frusta (42 + 43.5 degrees) with no bins beyond them.
double camera_half_span(const Scenario& sc) {
  return std::max(std::abs(sc.camera_left.mount_yaw) + 0.5 * sc.camera_left.hfov,
                  std::abs(sc.camera_right.mount_yaw) + 0.5 * sc.camera_right.hfov);
}

ExtrinsicEstimate calibrate(const Scenario& sc) {
  const RigidTransform ground_truth = compose(
      invert(sc.camera_right.robot_from_camera()), sc.camera_left.robot_from_camera());
  if (!sc.calibration.marker_log.empty()) {
    std::ifstream in(sc.calibration.marker_log);
    if (!in) {
      throw std::runtime_error("cannot open marker log " +
                               sc.calibration.marker_log.string());
    }
    const auto records = read_marker_log(in);
    const auto pairs = pair_by_index(records, CameraId::Cam1, CameraId::Cam2);
    return estimate_extrinsic(pairs);
  }
  const auto pairs = synth_marker_observations(
      ground_truth, sc.calibration.samples, sc.calibration.noise, sc.seed);
  return estimate_extrinsic(pairs);
}

struct CameraRig {
  RigidTransform lidar_from_left;
  RigidTransform lidar_from_right;
  ScanSpec spec;
};

CameraRig make_rig(const Scenario& sc, const ExtrinsicEstimate& cal) {
  CameraRig rig;
  rig.lidar_from_left =
      compose(invert(sc.lidar.robot_from_lidar()), sc.camera_left.robot_from_camera());
  // The right camera is placed through the calibrated chain, not its mount.
  rig.lidar_from_right = compose(rig.lidar_from_left, invert(cal.transform));
  const double half = camera_half_span(sc);
  rig.spec = {-half, half, sc.fusion.camera_bin,
              std::min(sc.camera_left.max_range, sc.camera_right.max_range)};
  return rig;
}

// Clears where the floor was seen, then marks in-band returns.
void update_camera_layer(CostLayer& layer, const Pose2D& lidar_pose, const World& world,
                         const Pose2D& pose, const Scenario& sc, const CameraRig& rig,
                         std::uint64_t tick) {
  PointCloud cloud = cloud_to_lidar_frame(
      render_depth_cloud(world, pose, sc.camera_left, FrameId::Camera1, sc.seed, tick),
      rig.lidar_from_left);
  const PointCloud right = cloud_to_lidar_frame(
      render_depth_cloud(world, pose, sc.camera_right, FrameId::Camera2, sc.seed, tick),
      rig.lidar_from_right);
  cloud.points.insert(cloud.points.end(), right.points.begin(), right.points.end());
  clear_from_scan(layer, lidar_pose, free_space_scan(cloud, sc.fusion.z_band, rig.spec),
                  sc.fusion.marking);
  mark_from_scan(layer, lidar_pose,
                 bin_to_pseudo_scan(flatten(cloud, sc.fusion.z_band), rig.spec),
                 sc.fusion.marking);
}

void summarize(ScenarioResult& r) {
  RunMetrics& m = r.metrics;
  m.ticks = r.ticks.size();
  if (r.ticks.empty()) return;
  double err_sum = 0.0, ex_sum = 0.0, ey_sum = 0.0;
  m.min_clearance = r.ticks.front().clearance;
  m.min_seat_clearance = r.ticks.front().seat_clearance;
  for (std::size_t i = 0; i < r.ticks.size(); ++i) {
    const TickRecord& k = r.ticks[i];
    const Vec2 e = k.estimate.position() - k.ground_truth.position();
    err_sum += e.norm();
    ex_sum += std::abs(e.x());
    ey_sum += std::abs(e.y());
    m.max_position_error = std::max(m.max_position_error, e.norm());
    m.min_clearance = std::min(m.min_clearance, k.clearance);
    m.min_seat_clearance = std::min(m.min_seat_clearance, k.seat_clearance);
    if (i > 0) {
      m.path_length +=
          (k.ground_truth.position() - r.ticks[i - 1].ground_truth.position()).norm();
    }
  }
  const double n = static_cast<double>(r.ticks.size());
  m.mean_position_error = err_sum / n;
  m.mean_abs_error_x = ex_sum / n;
  m.mean_abs_error_y = ey_sum / n;
  m.duration = r.ticks.back().t;
  m.final_goal_distance = (r.ticks.back().ground_truth.position() - r.goal).norm();
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::GoalReached: return "goal_reached";
    case Termination::Collided: return "collided";
    case Termination::TimedOut: return "timed_out";
  }
  return "unknown";
}

double seat_clearance(const std::vector<Obstacle>& obstacles, const Vec2& p) {
  double best = kClearanceSearchRadius;
  for (const auto& o : obstacles) {
    if (const auto* chair = std::get_if<Chair>(&o)) {
      const Obstacle seat = Box{chair->center, chair->seat_size, chair->seat_hi};
      best = std::min(best, footprint_distance(seat, p));
    }
  }
  return best;
}

ScenarioResult run_scenario(const Scenario& sc) {
  if (auto violations = validate_scenario(sc); !violations.empty()) {
    throw ScenarioError(std::move(violations));
  }
  ScenarioResult result;
  result.scenario = sc.name;
  result.mode = sc.mode;
  result.seed = sc.seed;
  result.start = sc.start;
  result.goal = sc.goal;
  result.robot_radius = sc.robot_radius;
  result.calibration = calibrate(sc);
  const CameraRig rig = make_rig(sc, result.calibration);

  World world(sc.static_map, sc.obstacles);
  MultiLayerMap map(sc.static_map);
  RobotState robot;
  robot.ground_truth = sc.start;
  robot.radius = sc.robot_radius;

  const double dt = sc.planner.dt;
  const auto max_ticks = static_cast<std::uint64_t>(std::ceil(sc.max_duration / dt - 1e-9));

  for (std::uint64_t tick = 0;; ++tick) {
    TickRecord rec;
    rec.t = static_cast<double>(tick) * dt;
    rec.ground_truth = robot.ground_truth;
    rec.estimate = localize(robot.ground_truth, sc.localization, sc.seed, tick);
    rec.clearance = world.clearance(robot.ground_truth.position());
    rec.seat_clearance = seat_clearance(world.obstacles(), robot.ground_truth.position());

    std::optional<Termination> done;
    if (rec.clearance < robot.radius) {
      done = Termination::Collided;
    } else if ((robot.ground_truth.position() - sc.goal).norm() < sc.goal_tolerance) {
      done = Termination::GoalReached;
    } else if (tick >= max_ticks) {
      done = Termination::TimedOut;
    }
    if (done) {
      result.ticks.push_back(rec);
      result.termination = *done;
      break;
    }

    const Pose2D lidar_pose = compose_pose(rec.estimate, sc.lidar.mount);
    const PseudoScan lidar = raycast_lidar(world, robot.ground_truth, sc.lidar, sc.seed, tick);
    mark_from_scan(map.lidar(), lidar_pose, lidar, sc.fusion.marking);
    if (sc.mode == FusionMode::Fusion) {
      update_camera_layer(map.camera(), lidar_pose, world, robot.ground_truth, sc, rig,
                          tick);
    }

    const InflatedMap inflated = inflate(map, sc.planner.expanded_radius);
    const Selection sel = select_velocity({rec.estimate, robot.actual}, sc.goal, inflated,
                                          sc.limits, sc.planner);
    rec.command = sel.best;
    result.ticks.push_back(rec);
    step_world(world, robot, sel.best, dt, sc.limits);
  }

  summarize(result);
  result.map = std::move(map);
  result.obstacles = world.obstacles();
  return result;
}

int exit_code(const ScenarioResult& result) {
  switch (result.termination) {
    case Termination::GoalReached: return 0;
    case Termination::Collided: return 2;
    case Termination::TimedOut: return 3;
  }
  return 1;
}

ModeComparison compare_modes(const Scenario& scenario) {
  Scenario lidar = scenario;
  lidar.mode = FusionMode::LidarOnly;
  Scenario fusion = scenario;
  fusion.mode = FusionMode::Fusion;

  ModeComparison c;
  auto lidar_run = std::async(std::launch::async, [&] { return run_scenario(lidar); });
  c.fusion = run_scenario(fusion);
  c.lidar = lidar_run.get();

  const auto add = [&](std::string name, double RunMetrics::*field) {
    c.deltas.push_back({std::move(name), c.lidar.metrics.*field, c.fusion.metrics.*field});
  };
  add("path_length", &RunMetrics::path_length);
  add("duration", &RunMetrics::duration);
  add("mean_position_error", &RunMetrics::mean_position_error);
  add("max_position_error", &RunMetrics::max_position_error);
  add("min_clearance", &RunMetrics::min_clearance);
  add("min_seat_clearance", &RunMetrics::min_seat_clearance);
  add("final_goal_distance", &RunMetrics::final_goal_distance);

  c.fusion_safe = c.fusion.goal_reached();
  c.lidar_unsafe = c.lidar.collided() ||
                   c.lidar.metrics.min_seat_clearance < c.lidar.robot_radius;
  if (c.fusion_safe && c.lidar_unsafe) {
    c.verdict = "fusion safe, lidar-only unsafe";
  } else if (c.fusion_safe && c.lidar.goal_reached()) {
    c.verdict = "both modes reached the goal";
  } else if (c.fusion_safe) {
    c.verdict = "fusion safe, lidar-only " + std::string(to_string(c.lidar.termination));
  } else {
    c.verdict = "fusion " + std::string(to_string(c.fusion.termination)) +
                ", lidar-only " + std::string(to_string(c.lidar.termination));
  }
  return c;
}

}  // namespace fusionnav
