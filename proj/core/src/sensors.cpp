#include "fusionnav/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fusionnav/random.hpp"

namespace fusionnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Noisy ranges never collapse onto the sensor origin.
constexpr double kMinRange = 1e-3;

double noisy(double range, double sigma, double max_range, Rng& rng) {
  return std::clamp(range + rng.normal(sigma), kMinRange, max_range);
}

}  // namespace

void LidarModel::validate() const {
  if (!(fov > 0.0 && fov <= 2.0 * std::numbers::pi)) {
    throw std::invalid_argument("lidar fov must be in (0, 2pi]");
  }
  if (!(angular_resolution > 0.0)) {
    throw std::invalid_argument("lidar angular resolution must be positive");
  }
  if (!(max_range > 0.0)) throw std::invalid_argument("lidar max_range must be positive");
  if (!(range_sigma >= 0.0)) throw std::invalid_argument("lidar noise must be non-negative");
}

ScanSpec LidarModel::scan_spec() const {
  return {-0.5 * fov, 0.5 * fov, angular_resolution, max_range};
}

RigidTransform LidarModel::robot_from_lidar() const {
  const RigidTransform planar = mount.to_transform();
  return {planar.rotation(), Vec3(mount.x(), mount.y(), mount_height)};
}

void CameraModel::validate() const {
  if (!(hfov > 0.0 && hfov < std::numbers::pi) ||
      !(vfov > 0.0 && vfov < std::numbers::pi)) {
    throw std::invalid_argument("camera fields of view must be in (0, pi)");
  }
  if (cols < 1 || rows < 1) throw std::invalid_argument("camera ray grid must be non-empty");
  if (!(max_range > 0.0)) throw std::invalid_argument("camera max_range must be positive");
  if (!(range_sigma >= 0.0)) throw std::invalid_argument("camera noise must be non-negative");
}

RigidTransform CameraModel::robot_from_camera() const {
  const RigidTransform yaw = rotation_about_axis(Vec3::UnitZ(), mount_yaw);
  const RigidTransform pitch = rotation_about_axis(Vec3::UnitY(), -tilt);
  return RigidTransform::from_translation(mount_position) * yaw * pitch;
}

Vec3 CameraModel::pixel_ray(int col, int row) const {
  const double u = 2.0 * (col + 0.5) / cols - 1.0;  // -1 left edge, +1 right
  const double w = 1.0 - 2.0 * (row + 0.5) / rows;  // +1 top, -1 bottom
  return Vec3(1.0, -u * std::tan(0.5 * hfov), w * std::tan(0.5 * vfov))
      .normalized();
}

double planar_hit_distance(const World& world, const Vec2& origin,
                           const Vec2& dir, double z, double max_range) {
  double best = world.raycast_static(origin, dir, max_range);
  for (const auto& obstacle : world.obstacles()) {
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, Box>) {
            if (z >= 0.0 && z <= o.height) {
              best = std::min(best, ray_rect(origin, dir, o.center - 0.5 * o.size,
                                             o.center + 0.5 * o.size));
            }
          } else if constexpr (std::is_same_v<T, Chair>) {
            if (z >= o.seat_lo && z <= o.seat_hi) {
              best = std::min(best,
                              ray_rect(origin, dir, o.center - 0.5 * o.seat_size,
                                       o.center + 0.5 * o.seat_size));
            }
            if (z >= 0.0 && z <= o.leg_height) {
              for (const auto& leg : o.leg_centers()) {
                best = std::min(best, ray_circle(origin, dir, leg, o.leg_radius));
              }
            }
          } else {
            if (z >= 0.0 && z <= o.height) {
              best = std::min(best, ray_circle(origin, dir, o.position, o.radius));
            }
          }
        },
        obstacle);
  }
  return best <= max_range ? best : kInf;
}

double spatial_hit_distance(const World& world, const Vec3& origin,
                            const Vec3& dir, double max_range) {
  double best = kInf;
  if (dir.z() < 0.0) best = -origin.z() / dir.z();

  const Vec2 dir_xy(dir.x(), dir.y());
  const double planar_norm = dir_xy.norm();
  if (planar_norm > 1e-12) {
    const double limit = std::min(best, max_range) * planar_norm;
    const double t = world.raycast_static(origin.head<2>(), dir_xy / planar_norm,
                                          limit);
    best = std::min(best, t / planar_norm);
  }

  for (const auto& obstacle : world.obstacles()) {
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, Box>) {
            const Vec2 lo = o.center - 0.5 * o.size;
            const Vec2 hi = o.center + 0.5 * o.size;
            best = std::min(best, ray_aabb(origin, dir, Vec3(lo.x(), lo.y(), 0.0),
                                           Vec3(hi.x(), hi.y(), o.height)));
          } else if constexpr (std::is_same_v<T, Chair>) {
            const Vec2 lo = o.center - 0.5 * o.seat_size;
            const Vec2 hi = o.center + 0.5 * o.seat_size;
            const double top = std::max(o.seat_hi, o.leg_height);
            const double bound = ray_aabb(origin, dir, Vec3(lo.x(), lo.y(), 0.0),
                                          Vec3(hi.x(), hi.y(), top));
            if (bound >= best) return;
            best = std::min(best,
                            ray_aabb(origin, dir, Vec3(lo.x(), lo.y(), o.seat_lo),
                                     Vec3(hi.x(), hi.y(), o.seat_hi)));
            for (const auto& leg : o.leg_centers()) {
              best = std::min(best, ray_cylinder(origin, dir, leg, o.leg_radius,
                                                 o.leg_height));
            }
          } else {
            best = std::min(best, ray_cylinder(origin, dir, o.position, o.radius,
                                               o.height));
          }
        },
        obstacle);
  }
  return best <= max_range ? best : kInf;
}

PseudoScan raycast_lidar(const World& world, const Pose2D& robot_pose,
                         const LidarModel& model, std::uint64_t seed,
                         std::uint64_t tick) {
  const Pose2D sensor = compose_pose(robot_pose, model.mount);
  PseudoScan scan = PseudoScan::empty(model.scan_spec());
  Rng rng(seed, Stream::Lidar, tick);
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double bearing = sensor.theta() + scan.spec.bin_angle(i);
    const Vec2 dir(std::cos(bearing), std::sin(bearing));
    const double t = planar_hit_distance(world, sensor.position(), dir,
                                         model.mount_height, model.max_range);
    scan.ranges[i] = std::isfinite(t)
                         ? noisy(t, model.range_sigma, model.max_range, rng)
                         : model.max_range;
  }
  return scan;
}

PointCloud render_depth_cloud(const World& world, const Pose2D& robot_pose,
                              const CameraModel& model, FrameId frame,
                              std::uint64_t seed, std::uint64_t tick) {
  const RigidTransform world_from_camera =
      robot_pose.to_transform() * model.robot_from_camera();
  const Vec3 origin = world_from_camera.translation();
  const Mat3& rotation = world_from_camera.rotation();
  Rng rng(seed, frame == FrameId::Camera2 ? Stream::Camera2 : Stream::Camera1,
          tick);

  PointCloud cloud;
  cloud.frame = frame;
  cloud.points.reserve(static_cast<std::size_t>(model.cols) * model.rows);
  // Same directions as pixel_ray, with the tangents hoisted out of the loop.
  std::vector<double> lateral(model.cols);
  for (int col = 0; col < model.cols; ++col) {
    lateral[col] = model.pixel_ray(col, 0).y() / model.pixel_ray(col, 0).x();
  }
  for (int row = 0; row < model.rows; ++row) {
    const Vec3 first = model.pixel_ray(0, row);
    const double vertical = first.z() / first.x();
    for (int col = 0; col < model.cols; ++col) {
      const Vec3 ray = Vec3(1.0, lateral[col], vertical).normalized();
      const double t =
          spatial_hit_distance(world, origin, rotation * ray, model.max_range);
      if (!std::isfinite(t)) continue;
      cloud.points.push_back(noisy(t, model.range_sigma, model.max_range, rng) *
                             ray);
    }
  }
  return cloud;
}

}  // namespace fusionnav
