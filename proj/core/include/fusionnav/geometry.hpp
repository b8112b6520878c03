/*
 * geometry.hpp
 *
 * Rigid-body transforms in SE(3) and planar robot poses.
 *
 * Frame convention used throughout the library: a transform named
 * `a_from_b` maps coordinates expressed in frame b into frame a, i.e.
 * p_a = R * p_b + t. Sensor and robot frames are x forward, y left, z up.
 */

#ifndef FUSIONNAV_GEOMETRY_HPP
#define FUSIONNAV_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/LU>

namespace fusionnav {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Tolerance for the orthonormality and determinant checks on rotations.
inline constexpr double kRotationTolerance = 1e-9;

/// Largest elementwise deviation of R^T R from the identity.
[[nodiscard]] double orthonormality_residual(const Mat3& rotation);

/// Nearest rotation matrix in the Frobenius sense (polar decomposition).
/// Reflections are corrected so the result has determinant +1.
[[nodiscard]] Mat3 nearest_rotation(const Mat3& m);

/// Geodesic angle of a rotation matrix, in [0, pi].
[[nodiscard]] double rotation_angle(const Mat3& rotation);

/// Rotation vector (axis * angle) of a rotation matrix.
[[nodiscard]] Vec3 rotation_log(const Mat3& rotation);

/// Rotation matrix from a rotation vector (Rodrigues).
[[nodiscard]] Mat3 rotation_exp(const Vec3& rotation_vector);

/**
 * @brief Proper rigid transform: orthonormal rotation with det +1 plus a
 *        translation in meters.
 *
 * The checked constructor rejects matrices that are not rotations within
 * kRotationTolerance. Default construction yields the identity.
 */
class RigidTransform {
 public:
  RigidTransform();
  RigidTransform(const Mat3& rotation, const Vec3& translation);

  [[nodiscard]] static RigidTransform identity() { return {}; }
  [[nodiscard]] static RigidTransform from_translation(const Vec3& t);

  [[nodiscard]] const Mat3& rotation() const { return rotation_; }
  [[nodiscard]] const Vec3& translation() const { return translation_; }

  friend bool operator==(const RigidTransform& a, const RigidTransform& b) {
    return a.rotation_ == b.rotation_ && a.translation_ == b.translation_;
  }

 private:
  struct Unchecked {};
  RigidTransform(Unchecked, const Mat3& rotation, const Vec3& translation)
      : rotation_(rotation), translation_(translation) {}

  friend RigidTransform compose(const RigidTransform&, const RigidTransform&);
  friend RigidTransform invert(const RigidTransform&);

  Mat3 rotation_;
  Vec3 translation_;
};

/// Homogeneous product a * b: applies b first, then a.
[[nodiscard]] RigidTransform compose(const RigidTransform& a,
                                     const RigidTransform& b);

/// Inverse transform: rotation R^T, translation -R^T t.
[[nodiscard]] RigidTransform invert(const RigidTransform& t);

[[nodiscard]] Vec3 transform_point(const RigidTransform& t, const Vec3& p);

/// Rodrigues rotation about a unit axis. Throws std::invalid_argument when
/// |axis| deviates from 1 by more than kRotationTolerance.
[[nodiscard]] RigidTransform rotation_about_axis(const Vec3& axis,
                                                 double angle);

inline RigidTransform operator*(const RigidTransform& a,
                                const RigidTransform& b) {
  return compose(a, b);
}

/// Wraps an angle into (-pi, pi].
[[nodiscard]] double normalize_angle(double angle);

/// Planar pose on the ground plane. Heading is kept in (-pi, pi].
class Pose2D {
 public:
  Pose2D() = default;
  Pose2D(double x, double y, double theta)
      : x_(x), y_(y), theta_(normalize_angle(theta)) {}

  [[nodiscard]] double x() const { return x_; }
  [[nodiscard]] double y() const { return y_; }
  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] Vec2 position() const { return {x_, y_}; }

  /// Lifts the pose into SE(3) as a rotation about +z at height 0.
  [[nodiscard]] RigidTransform to_transform() const;

  friend bool operator==(const Pose2D&, const Pose2D&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double theta_ = 0.0;
};

/// Pose of a child frame mounted at `offset` (in the parent's frame).
[[nodiscard]] Pose2D compose_pose(const Pose2D& parent, const Pose2D& offset);

}  // namespace fusionnav

#endif  // FUSIONNAV_GEOMETRY_HPP
