/*
 * sensors.hpp
 *
 * Simulated 2D LiDAR and tilted depth cameras.
 */

#ifndef FUSIONNAV_SENSORS_HPP
#define FUSIONNAV_SENSORS_HPP

#include <cstdint>
#include <numbers>

#include "fusionnav/geometry.hpp"
#include "fusionnav/projection.hpp"
#include "fusionnav/world.hpp"

namespace fusionnav {

inline constexpr double deg_to_rad(double deg) {
  return deg * std::numbers::pi / 180.0;
}

struct LidarModel {
  double fov = deg_to_rad(240.0);
  double angular_resolution = deg_to_rad(0.5);
  double max_range = 8.0;
  Pose2D mount{0.1, 0.0, 0.0};  ///< planar pose on the robot
  double mount_height = 0.2;
  double range_sigma = 0.01;

  void validate() const;
  /// Symmetric scan about the sensor's x axis.
  [[nodiscard]] ScanSpec scan_spec() const;
  [[nodiscard]] RigidTransform robot_from_lidar() const;
};

/// Pinhole depth camera. Its frame is x forward, y left, z up; it is
/// yawed on the robot and then pitched up by `tilt`.
struct CameraModel {
  double hfov = deg_to_rad(87.0);
  double vfov = deg_to_rad(58.0);
  int cols = 160;
  int rows = 120;
  double tilt = deg_to_rad(15.0);  ///< upward pitch
  Vec3 mount_position = Vec3(0.1, 0.15, 0.3);
  double mount_yaw = deg_to_rad(42.0);
  double max_range = 4.0;
  double range_sigma = 0.01;

  void validate() const;
  [[nodiscard]] RigidTransform robot_from_camera() const;
  /// Unit ray direction of pixel (col, row) in the camera frame. Row 0 is
  /// the top of the image.
  [[nodiscard]] Vec3 pixel_ray(int col, int row) const;
};

/**
 * @brief One LiDAR sweep against the world cross-section at mount height.
 *
 * Misses report max_range. Hits get Gaussian range noise drawn from the
 * (seed, tick) LiDAR stream.
 */
[[nodiscard]] PseudoScan raycast_lidar(const World& world,
                                       const Pose2D& robot_pose,
                                       const LidarModel& model,
                                       std::uint64_t seed,
                                       std::uint64_t tick = 0);

/**
 * @brief Depth image rendered as a point cloud in the camera frame.
 *
 * Rays hit the floor plane, wall prisms and full 3D obstacle solids.
 * Rays with nothing within max_range are omitted. `frame` selects the
 * noise stream and tags the cloud.
 */
[[nodiscard]] PointCloud render_depth_cloud(const World& world,
                                            const Pose2D& robot_pose,
                                            const CameraModel& model,
                                            FrameId frame, std::uint64_t seed,
                                            std::uint64_t tick = 0);

/// Nearest hit distance of a planar ray at height z against walls and
/// obstacle cross-sections, or +inf.
[[nodiscard]] double planar_hit_distance(const World& world, const Vec2& origin,
                                         const Vec2& dir, double z,
                                         double max_range);

/// Nearest hit distance of a 3D ray against floor, walls and obstacles.
[[nodiscard]] double spatial_hit_distance(const World& world, const Vec3& origin,
                                          const Vec3& dir, double max_range);

}  // namespace fusionnav

#endif  // FUSIONNAV_SENSORS_HPP
