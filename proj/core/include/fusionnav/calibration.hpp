/*
 * calibration.hpp
 *
 * Camera-to-camera extrinsics from marker poses observed through a shared
 * reference marker. Each observation carries cam_M_marker, the transform
 * that maps marker-frame points into the observing camera's frame.
 */

#ifndef FUSIONNAV_CALIBRATION_HPP
#define FUSIONNAV_CALIBRATION_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "fusionnav/geometry.hpp"

namespace fusionnav {

enum class CameraId { Cam1, Cam2, External };

[[nodiscard]] std::string_view to_string(CameraId id);
/// Parses "cam1", "cam2" or "external". Throws std::invalid_argument.
[[nodiscard]] CameraId parse_camera_id(std::string_view token);

struct MarkerObservation {
  CameraId camera = CameraId::Cam1;
  RigidTransform pose;  ///< camera_from_marker
  double timestamp = 0.0;  ///< [s]
};

/// Two synchronized observations of the same marker. The estimated
/// extrinsic maps `source` camera coordinates into `target` coordinates.
struct ObservationPair {
  MarkerObservation source;
  MarkerObservation target;
};

struct ExtrinsicEstimate {
  RigidTransform transform;         ///< target_from_source
  double rotation_residual = 0.0;   ///< RMS geodesic deviation [rad]
  double translation_residual = 0.0;  ///< RMS Euclidean deviation [m]
  std::size_t sample_count = 0;
};

struct ObservationNoise {
  double rotation_sigma = 0.0;     ///< per-axis rotation-vector sigma [rad]
  double translation_sigma = 0.0;  ///< per-axis sigma [m]
};

/// target_from_source = target_from_marker * (source_from_marker)^-1.
[[nodiscard]] RigidTransform chain_extrinsic(const RigidTransform& pose_target,
                                             const RigidTransform& pose_source);

/**
 * @brief Averages the chained extrinsic over synchronized observation pairs.
 *
 * Translation is the arithmetic mean, rotation the chordal mean projected
 * back onto SO(3). Sums use pairwise summation so the result does not
 * depend on input order beyond the last few ulps.
 *
 * Throws std::invalid_argument("no observations") on empty input.
 */
[[nodiscard]] ExtrinsicEstimate estimate_extrinsic(
    std::span<const ObservationPair> pairs);

/**
 * @brief Synthesizes marker observations for a known cam2_from_cam1.
 *
 * Each pair draws a random marker placement in front of camera 1. Noise is
 * injected on the camera-2 observation as a perturbation expressed in the
 * camera-1 frame, so the chained transform scatters as G * N with N having
 * the configured per-axis sigmas. Deterministic for a fixed seed.
 */
[[nodiscard]] std::vector<ObservationPair> synth_marker_observations(
    const RigidTransform& ground_truth, std::size_t n,
    const ObservationNoise& noise, std::uint64_t seed);

/// Reads a whitespace-separated marker log. One record per line:
/// `camera_id timestamp r00 r01 r02 r10 r11 r12 r20 r21 r22 tx ty tz`.
/// '#' starts a comment. Throws std::runtime_error naming the line.
[[nodiscard]] std::vector<MarkerObservation> read_marker_log(std::istream& in);

void write_marker_log(std::ostream& out,
                      std::span<const MarkerObservation> observations);

/// Pairs the i-th `source` record with the i-th `target` record.
[[nodiscard]] std::vector<ObservationPair> pair_by_index(
    std::span<const MarkerObservation> observations, CameraId source,
    CameraId target);

}  // namespace fusionnav

#endif  // FUSIONNAV_CALIBRATION_HPP
