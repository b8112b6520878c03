#include "fusionnav/projection.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fusionnav {

namespace {

// Absorbs rounding when a bearing lands exactly on a bin edge, e.g. 0 rad
// in a scan starting at -120 deg with 1 deg bins.
constexpr double kBinEdgeSlack = 1e-9;

void require_valid(const ScanSpec& spec) {
  if (!(spec.angular_resolution > 0.0)) {
    throw std::invalid_argument("scan angular resolution must be positive");
  }
  if (!(spec.angle_max >= spec.angle_min)) {
    throw std::invalid_argument("scan angle_max must not be below angle_min");
  }
  if (!(spec.max_range > 0.0)) {
    throw std::invalid_argument("scan max_range must be positive");
  }
}

}  // namespace

std::size_t ScanSpec::bin_count() const {
  return static_cast<std::size_t>(
             std::floor((angle_max - angle_min) / angular_resolution +
                        kBinEdgeSlack)) +
         1;
}

PseudoScan PseudoScan::empty(const ScanSpec& spec) {
  require_valid(spec);
  return {spec, std::vector<double>(spec.bin_count(),
                                    std::numeric_limits<double>::infinity())};
}

PointCloud cloud_to_lidar_frame(const PointCloud& cloud,
                                const RigidTransform& lidar_from_camera) {
  PointCloud out;
  out.frame = FrameId::Lidar;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) {
    out.points.push_back(transform_point(lidar_from_camera, p));
  }
  return out;
}

PlanarPoints flatten(const PointCloud& lidar_cloud, const ZBand& band) {
  PlanarPoints out;
  out.points.reserve(lidar_cloud.points.size());
  for (const auto& p : lidar_cloud.points) {
    if (p.z() >= band.lo && p.z() <= band.hi) {
      out.points.emplace_back(p.x(), p.y());
    }
  }
  return out;
}

PseudoScan bin_to_pseudo_scan(const PlanarPoints& points, const ScanSpec& spec) {
  PseudoScan scan = PseudoScan::empty(spec);
  const std::size_t bins = scan.ranges.size();
  for (const auto& p : points.points) {
    const double range = p.norm();
    if (!(range > 0.0) || range > spec.max_range) continue;
    const double offset =
        (std::atan2(p.y(), p.x()) - spec.angle_min) / spec.angular_resolution;
    if (offset < -kBinEdgeSlack) continue;
    const auto bin =
        static_cast<std::size_t>(std::floor(offset + kBinEdgeSlack));
    if (bin >= bins) continue;
    scan.ranges[bin] = std::min(scan.ranges[bin], range);
  }
  return scan;
}

PseudoScan free_space_scan(const PointCloud& lidar_cloud, const ZBand& band,
                           const ScanSpec& spec) {
  PseudoScan scan = PseudoScan::empty(spec);
  std::vector<bool> seen(scan.ranges.size(), false);
  for (const auto& p : lidar_cloud.points) {
    if (!(p.z() < band.lo)) continue;
    const double range = std::min(Vec2(p.x(), p.y()).norm(), spec.max_range);
    if (!(range > 0.0)) continue;
    const double offset =
        (std::atan2(p.y(), p.x()) - spec.angle_min) / spec.angular_resolution;
    if (offset < -kBinEdgeSlack) continue;
    const auto bin =
        static_cast<std::size_t>(std::floor(offset + kBinEdgeSlack));
    if (bin >= seen.size()) continue;
    scan.ranges[bin] = seen[bin] ? std::max(scan.ranges[bin], range) : range;
    seen[bin] = true;
  }
  return scan;
}

}  // namespace fusionnav
