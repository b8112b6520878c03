/*
 * projection.hpp
 *
 * Camera point clouds -> LiDAR frame -> scanning plane -> pseudo-scan.
 */

#ifndef FUSIONNAV_PROJECTION_HPP
#define FUSIONNAV_PROJECTION_HPP

#include <vector>

#include "fusionnav/geometry.hpp"

namespace fusionnav {

enum class FrameId { Camera1, Camera2, Lidar };

struct PointCloud {
  FrameId frame = FrameId::Lidar;
  std::vector<Vec3> points;
};

/// Points on the LiDAR scanning plane (z implicitly 0).
struct PlanarPoints {
  std::vector<Vec2> points;
};

/// Height band, in the LiDAR frame, of points kept by flatten().
struct ZBand {
  double lo = -0.05;
  double hi = 1.60;
};

struct ScanSpec {
  double angle_min = 0.0;           ///< [rad]
  double angle_max = 0.0;           ///< [rad]
  double angular_resolution = 0.0;  ///< [rad]
  double max_range = 0.0;           ///< [m]

  /// floor((angle_max - angle_min) / angular_resolution) + 1
  [[nodiscard]] std::size_t bin_count() const;
  /// Bearing of bin i, measured at the start of the bin.
  [[nodiscard]] double bin_angle(std::size_t i) const {
    return angle_min + static_cast<double>(i) * angular_resolution;
  }
};

/// Range per angular bin. Empty bins hold +infinity; a range equal to
/// max_range means the beam saw nothing within range.
struct PseudoScan {
  ScanSpec spec;
  std::vector<double> ranges;

  [[nodiscard]] static PseudoScan empty(const ScanSpec& spec);
};

/// Applies lidar_from_camera to every point; the result is in the LiDAR frame.
[[nodiscard]] PointCloud cloud_to_lidar_frame(
    const PointCloud& cloud, const RigidTransform& lidar_from_camera);

/// Keeps points whose z lies in the band and drops the z component.
[[nodiscard]] PlanarPoints flatten(const PointCloud& lidar_cloud,
                                   const ZBand& band = {});

/// Bins planar points by bearing, keeping the nearest range per bin.
/// Throws std::invalid_argument when the ScanSpec is malformed.
[[nodiscard]] PseudoScan bin_to_pseudo_scan(const PlanarPoints& points,
                                            const ScanSpec& spec);

/// Free-space evidence from returns below the band (the floor): per bin,
/// the farthest planar range, capped at max_range. +inf where the floor
/// was not seen.
[[nodiscard]] PseudoScan free_space_scan(const PointCloud& lidar_cloud,
                                         const ZBand& band,
                                         const ScanSpec& spec);

}  // namespace fusionnav

#endif  // FUSIONNAV_PROJECTION_HPP
