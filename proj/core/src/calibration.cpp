#include "fusionnav/calibration.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fusionnav/random.hpp"

namespace fusionnav {

namespace {

template <typename T, typename Fn>
T pairwise_sum(std::size_t begin, std::size_t end, const Fn& term) {
  if (end - begin == 1) return term(begin);
  if (end - begin == 2) return T(term(begin) + term(begin + 1));
  const std::size_t mid = begin + (end - begin) / 2;
  return T(pairwise_sum<T>(begin, mid, term) + pairwise_sum<T>(mid, end, term));
}

// Marker logs written with limited precision are snapped back onto SO(3)
// when they are this close; anything worse is a corrupt record.
constexpr double kLogRotationSnap = 1e-6;

}  // namespace

std::string_view to_string(CameraId id) {
  switch (id) {
    case CameraId::Cam1:
      return "cam1";
    case CameraId::Cam2:
      return "cam2";
    case CameraId::External:
      return "external";
  }
  return "unknown";
}

CameraId parse_camera_id(std::string_view token) {
  if (token == "cam1") return CameraId::Cam1;
  if (token == "cam2") return CameraId::Cam2;
  if (token == "external") return CameraId::External;
  throw std::invalid_argument("unknown camera id '" + std::string(token) + "'");
}

RigidTransform chain_extrinsic(const RigidTransform& pose_target,
                               const RigidTransform& pose_source) {
  return compose(pose_target, invert(pose_source));
}

ExtrinsicEstimate estimate_extrinsic(std::span<const ObservationPair> pairs) {
  if (pairs.empty()) {
    throw std::invalid_argument("no observations");
  }
  const std::size_t n = pairs.size();
  std::vector<RigidTransform> chained;
  chained.reserve(n);
  for (const auto& p : pairs) {
    chained.push_back(chain_extrinsic(p.target.pose, p.source.pose));
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  const Vec3 mean_t =
      pairwise_sum<Vec3>(0, n, [&](std::size_t i) -> Vec3 {
        return chained[i].translation();
      }) * inv_n;
  const Mat3 chordal =
      pairwise_sum<Mat3>(0, n, [&](std::size_t i) -> Mat3 {
        return chained[i].rotation();
      }) * inv_n;

  ExtrinsicEstimate est;
  est.transform = RigidTransform(nearest_rotation(chordal), mean_t);
  est.sample_count = n;

  const Mat3 mean_rt = est.transform.rotation().transpose();
  const double rot_ss = pairwise_sum<double>(0, n, [&](std::size_t i) {
    const double a = rotation_angle(mean_rt * chained[i].rotation());
    return a * a;
  });
  const double trans_ss = pairwise_sum<double>(0, n, [&](std::size_t i) {
    return (chained[i].translation() - mean_t).squaredNorm();
  });
  est.rotation_residual = std::sqrt(rot_ss * inv_n);
  est.translation_residual = std::sqrt(trans_ss * inv_n);
  return est;
}

std::vector<ObservationPair> synth_marker_observations(
    const RigidTransform& ground_truth, std::size_t n,
    const ObservationNoise& noise, std::uint64_t seed) {
  if (n == 0) {
    throw std::invalid_argument("observation count must be at least 1");
  }
  if (noise.rotation_sigma < 0.0 || noise.translation_sigma < 0.0) {
    throw std::invalid_argument("noise sigmas must be non-negative");
  }
  Rng rng(seed, Stream::Calibration);
  std::vector<ObservationPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Marker somewhere in front of camera 1, roughly facing it.
    const Vec3 marker_rot(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                          rng.uniform(-0.5, 0.5));
    const Vec3 marker_pos(rng.uniform(0.5, 2.0), rng.uniform(-0.5, 0.5),
                          rng.uniform(-0.3, 0.3));
    const RigidTransform cam1_from_marker(rotation_exp(marker_rot), marker_pos);

    const Vec3 rot_noise(rng.normal(noise.rotation_sigma),
                         rng.normal(noise.rotation_sigma),
                         rng.normal(noise.rotation_sigma));
    const Vec3 trans_noise(rng.normal(noise.translation_sigma),
                           rng.normal(noise.translation_sigma),
                           rng.normal(noise.translation_sigma));
    const RigidTransform perturbation(rotation_exp(rot_noise), trans_noise);
    const RigidTransform cam2_from_marker =
        ground_truth * perturbation * cam1_from_marker;

    const double stamp = 0.1 * static_cast<double>(i);
    out.push_back({{CameraId::Cam1, cam1_from_marker, stamp},
                   {CameraId::Cam2, cam2_from_marker, stamp}});
  }
  return out;
}

std::vector<MarkerObservation> read_marker_log(std::istream& in) {
  std::vector<MarkerObservation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string id_token;
    if (!(fields >> id_token)) continue;  // blank or comment-only

    const auto fail = [&](const std::string& why) {
      return std::runtime_error("marker log line " + std::to_string(line_no) +
                                ": " + why);
    };
    MarkerObservation obs;
    try {
      obs.camera = parse_camera_id(id_token);
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
    Mat3 r;
    Vec3 t;
    if (!(fields >> obs.timestamp)) throw fail("missing timestamp");
    for (int i = 0; i < 9; ++i) {
      if (!(fields >> r(i / 3, i % 3))) throw fail("expected 9 rotation values");
    }
    for (int i = 0; i < 3; ++i) {
      if (!(fields >> t(i))) throw fail("expected 3 translation values");
    }
    std::string extra;
    if (fields >> extra) throw fail("trailing field '" + extra + "'");
    if (!r.allFinite() || !t.allFinite()) throw fail("non-finite value");
    if (orthonormality_residual(r) > kLogRotationSnap ||
        std::abs(r.determinant() - 1.0) > kLogRotationSnap) {
      throw fail("rotation is not a proper rotation matrix");
    }
    obs.pose = RigidTransform(nearest_rotation(r), t);
    out.push_back(obs);
  }
  return out;
}

void write_marker_log(std::ostream& out,
                      std::span<const MarkerObservation> observations) {
  const auto old_precision = out.precision(
      std::numeric_limits<double>::max_digits10);
  out << "# camera_id timestamp r00 r01 r02 r10 r11 r12 r20 r21 r22 tx ty tz\n";
  for (const auto& obs : observations) {
    out << to_string(obs.camera) << ' ' << obs.timestamp;
    const Mat3& r = obs.pose.rotation();
    for (int i = 0; i < 9; ++i) out << ' ' << r(i / 3, i % 3);
    const Vec3& t = obs.pose.translation();
    out << ' ' << t.x() << ' ' << t.y() << ' ' << t.z() << '\n';
  }
  out.precision(old_precision);
}

std::vector<ObservationPair> pair_by_index(
    std::span<const MarkerObservation> observations, CameraId source,
    CameraId target) {
  std::vector<MarkerObservation> src;
  std::vector<MarkerObservation> dst;
  for (const auto& obs : observations) {
    if (obs.camera == source) src.push_back(obs);
    if (obs.camera == target) dst.push_back(obs);
  }
  if (src.size() != dst.size()) {
    throw std::invalid_argument(
        "unbalanced marker log: " + std::to_string(src.size()) + " " +
        std::string(to_string(source)) + " records vs " +
        std::to_string(dst.size()) + " " + std::string(to_string(target)));
  }
  std::vector<ObservationPair> pairs;
  pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    pairs.push_back({src[i], dst[i]});
  }
  return pairs;
}

}  // namespace fusionnav
