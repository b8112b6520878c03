#include "fusionnav/geometry.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fusionnav {

namespace {

void require_rotation(const Mat3& r) {
  if (!r.allFinite()) {
    throw std::invalid_argument("rotation has non-finite entries");
  }
  if (orthonormality_residual(r) > kRotationTolerance) {
    throw std::invalid_argument("rotation is not orthonormal");
  }
  if (std::abs(r.determinant() - 1.0) > kRotationTolerance) {
    throw std::invalid_argument("rotation determinant is not +1");
  }
}

}  // namespace

double orthonormality_residual(const Mat3& rotation) {
  return (rotation.transpose() * rotation - Mat3::Identity())
      .cwiseAbs()
      .maxCoeff();
}

Mat3 nearest_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
    d(2, 2) = -1.0;
  }
  return svd.matrixU() * d * svd.matrixV().transpose();
}

double rotation_angle(const Mat3& rotation) {
  // atan2 form stays accurate near 0 and pi where acos of the trace does not.
  const Vec3 axis_sin(rotation(2, 1) - rotation(1, 2),
                      rotation(0, 2) - rotation(2, 0),
                      rotation(1, 0) - rotation(0, 1));
  const double s = 0.5 * axis_sin.norm();
  const double c = 0.5 * (rotation.trace() - 1.0);
  return std::atan2(s, c);
}

Vec3 rotation_log(const Mat3& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return aa.axis() * aa.angle();
}

Mat3 rotation_exp(const Vec3& rotation_vector) {
  const double angle = rotation_vector.norm();
  if (angle == 0.0) {
    return Mat3::Identity();
  }
  return Eigen::AngleAxisd(angle, rotation_vector / angle).toRotationMatrix();
}

RigidTransform::RigidTransform()
    : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

RigidTransform::RigidTransform(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  require_rotation(rotation_);
  if (!translation_.allFinite()) {
    throw std::invalid_argument("translation has non-finite entries");
  }
}

RigidTransform RigidTransform::from_translation(const Vec3& t) {
  return {Mat3::Identity(), t};
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  Mat3 r = a.rotation_ * b.rotation_;
  if (orthonormality_residual(r) > kRotationTolerance) {
    r = nearest_rotation(r);
  }
  return {RigidTransform::Unchecked{}, r,
          a.rotation_ * b.translation_ + a.translation_};
}

RigidTransform invert(const RigidTransform& t) {
  const Mat3 rt = t.rotation_.transpose();
  return {RigidTransform::Unchecked{}, rt, -(rt * t.translation_)};
}

Vec3 transform_point(const RigidTransform& t, const Vec3& p) {
  return t.rotation() * p + t.translation();
}

RigidTransform rotation_about_axis(const Vec3& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > kRotationTolerance) {
    throw std::invalid_argument("rotation axis must be a unit vector");
  }
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3 k;
  // clang-format off
  k <<  0.0,     -axis.z(),  axis.y(),
        axis.z(),  0.0,     -axis.x(),
       -axis.y(),  axis.x(),  0.0;
  // clang-format on
  Mat3 r = Mat3::Identity() + s * k + (1.0 - c) * (k * k);
  if (orthonormality_residual(r) > kRotationTolerance) {
    r = nearest_rotation(r);
  }
  return {r, Vec3::Zero()};
}

double normalize_angle(double angle) {
  constexpr double kPi = std::numbers::pi;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("angle is not finite");
  }
  if (std::abs(angle) > 1e3) {
    angle = std::remainder(angle, kTwoPi);
  }
  while (angle > kPi) angle -= kTwoPi;
  while (angle <= -kPi) angle += kTwoPi;
  return angle;
}

RigidTransform Pose2D::to_transform() const {
  const double c = std::cos(theta_);
  const double s = std::sin(theta_);
  Mat3 r;
  // clang-format off
  r << c,  -s,  0.0,
       s,   c,  0.0,
       0.0, 0.0, 1.0;
  // clang-format on
  return {r, Vec3(x_, y_, 0.0)};
}

Pose2D compose_pose(const Pose2D& parent, const Pose2D& offset) {
  const double c = std::cos(parent.theta());
  const double s = std::sin(parent.theta());
  return {parent.x() + c * offset.x() - s * offset.y(),
          parent.y() + s * offset.x() + c * offset.y(),
          parent.theta() + offset.theta()};
}

}  // namespace fusionnav
