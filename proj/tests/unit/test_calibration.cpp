#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fusionnav/calibration.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace fusionnav {
namespace {

using testing::dense;
using testing::max_abs_diff;

constexpr double kDeg = std::numbers::pi / 180.0;

double transform_error(const RigidTransform& a, const RigidTransform& b) {
  return max_abs_diff(dense(a), dense(b));
}

ObservationPair pair_of(const RigidTransform& source, const RigidTransform& target) {
  return {{CameraId::Cam1, source, 0.0}, {CameraId::Cam2, target, 0.0}};
}

TEST(ChainExtrinsic, CoLocatedCamerasGiveIdentity) {
  testing::Engine rng(21);
  const auto m = testing::random_transform(rng);
  EXPECT_LT(transform_error(chain_extrinsic(m, m), RigidTransform::identity()), 1e-12);
}

TEST(ChainExtrinsic, PureOffset) {
  const auto t = chain_extrinsic(RigidTransform::from_translation({0.4, 0, 0}),
                                 RigidTransform::identity());
  EXPECT_LT(transform_error(t, RigidTransform::from_translation({0.4, 0, 0})), 1e-15);
}

TEST(ChainExtrinsic, RecoversSynthesizedExtrinsic) {
  testing::Engine rng(22);
  for (int i = 0; i < 500; ++i) {
    const auto g = testing::random_transform(rng, 1.0);
    const auto m = testing::random_transform(rng, 3.0);
    EXPECT_LT(transform_error(chain_extrinsic(g * m, m), g), 1e-9);
  }
}

TEST(ChainExtrinsic, OppositeChainsCancel) {
  testing::Engine rng(23);
  for (int i = 0; i < 500; ++i) {
    const auto a = testing::random_transform(rng);
    const auto b = testing::random_transform(rng);
    EXPECT_LT(transform_error(compose(chain_extrinsic(a, b), chain_extrinsic(b, a)),
                              RigidTransform::identity()),
              1e-9);
  }
}

TEST(EstimateExtrinsic, EmptyInputThrows) {
  try {
    (void)estimate_extrinsic({});
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "no observations");
  }
}

TEST(EstimateExtrinsic, SingleNoiselessPair) {
  testing::Engine rng(24);
  const auto g = testing::random_transform(rng, 1.0);
  const auto m = testing::random_transform(rng, 2.0);
  const std::vector<ObservationPair> pairs{pair_of(m, g * m)};
  const auto est = estimate_extrinsic(pairs);
  EXPECT_LT(transform_error(est.transform, g), 1e-9);
  EXPECT_NEAR(est.rotation_residual, 0.0, 1e-9);
  EXPECT_NEAR(est.translation_residual, 0.0, 1e-12);
  EXPECT_EQ(est.sample_count, 1u);
}

TEST(EstimateExtrinsic, TranslationMeanAndResidual) {
  const std::vector<ObservationPair> pairs{
      pair_of(RigidTransform::identity(), RigidTransform::from_translation({1, 0, 0})),
      pair_of(RigidTransform::identity(), RigidTransform::from_translation({3, 0, 0}))};
  const auto est = estimate_extrinsic(pairs);
  EXPECT_TRUE(est.transform.translation().isApprox(Vec3(2, 0, 0)));
  EXPECT_NEAR(est.translation_residual, 1.0, 1e-12);
  EXPECT_NEAR(est.rotation_residual, 0.0, 1e-12);
}

TEST(EstimateExtrinsic, NoiselessIsExactForAnyCount) {
  testing::Engine rng(25);
  for (std::size_t n : {1u, 2u, 7u, 100u, 1000u}) {
    const auto g = testing::random_transform(rng, 1.0);
    const auto pairs = synth_marker_observations(g, n, {}, 99 + n);
    EXPECT_LT(transform_error(estimate_extrinsic(pairs).transform, g), 1e-9) << "n=" << n;
  }
}

TEST(EstimateExtrinsic, NoisyRecoveryWithinBounds) {
  testing::Engine rng(26);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = testing::random_transform(rng, 0.5);
    const auto pairs = synth_marker_observations(g, 100, {0.5 * kDeg, 0.005}, seed);
    const auto est = estimate_extrinsic(pairs);
    const double rot_err =
        rotation_angle(est.transform.rotation().transpose() * g.rotation());
    const double trans_err = (est.transform.translation() - g.translation()).norm();
    EXPECT_LT(rot_err, 0.2 * kDeg) << "seed " << seed;
    EXPECT_LT(trans_err, 0.002) << "seed " << seed;
  }
}

TEST(EstimateExtrinsic, PermutationInvariant) {
  testing::Engine rng(27);
  const auto g = testing::random_transform(rng, 0.5);
  auto pairs = synth_marker_observations(g, 257, {1.0 * kDeg, 0.01}, 5);
  const auto before = estimate_extrinsic(pairs);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const auto after = estimate_extrinsic(pairs);
    EXPECT_LT(transform_error(before.transform, after.transform), 1e-12);
    EXPECT_NEAR(before.rotation_residual, after.rotation_residual, 1e-12);
    EXPECT_NEAR(before.translation_residual, after.translation_residual, 1e-12);
  }
}

TEST(SynthMarkerObservations, DeterministicPerSeed) {
  testing::Engine rng(28);
  const auto g = testing::random_transform(rng, 0.5);
  const auto a = synth_marker_observations(g, 50, {0.01, 0.01}, 3);
  const auto b = synth_marker_observations(g, 50, {0.01, 0.01}, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(dense(a[i].source.pose), dense(b[i].source.pose));
    EXPECT_EQ(dense(a[i].target.pose), dense(b[i].target.pose));
  }
  const auto c = synth_marker_observations(g, 50, {0.01, 0.01}, 4);
  EXPECT_NE(dense(a[0].target.pose), dense(c[0].target.pose));
}

TEST(SynthMarkerObservations, ScatterMatchesConfiguredSigma) {
  const double rot_sigma = 1.0 * kDeg;
  const double trans_sigma = 0.01;
  const RigidTransform g = rotation_about_axis(Vec3::UnitZ(), -84.0 * kDeg);
  const auto pairs = synth_marker_observations(g, 1000, {rot_sigma, trans_sigma}, 17);

  // Per-axis sample std of the chained transforms around the ground truth,
  // pooled over x, y and z.
  double rot_ss = 0.0;
  double trans_ss = 0.0;
  for (const auto& p : pairs) {
    const auto chained = chain_extrinsic(p.target.pose, p.source.pose);
    rot_ss += rotation_log(g.rotation().transpose() * chained.rotation()).squaredNorm();
    trans_ss +=
        (g.rotation().transpose() * (chained.translation() - g.translation())).squaredNorm();
  }
  const double n = 3.0 * static_cast<double>(pairs.size());
  const double rot_std = std::sqrt(rot_ss / n);
  const double trans_std = std::sqrt(trans_ss / n);
  EXPECT_NEAR(rot_std, rot_sigma, 0.3 * rot_sigma);
  EXPECT_NEAR(trans_std, trans_sigma, 0.3 * trans_sigma);
}

TEST(SynthMarkerObservations, RejectsBadArguments) {
  EXPECT_THROW((void)synth_marker_observations(RigidTransform::identity(), 0, {}, 1),
               std::invalid_argument);
  EXPECT_THROW((void)synth_marker_observations(RigidTransform::identity(), 5, {-1.0, 0.0}, 1),
               std::invalid_argument);
}

TEST(MarkerLog, RoundTripPreservesEstimate) {
  testing::Engine rng(29);
  const auto g = testing::random_transform(rng, 0.5);
  const auto pairs = synth_marker_observations(g, 40, {0.005, 0.002}, 8);
  std::vector<MarkerObservation> records;
  for (const auto& p : pairs) {
    records.push_back(p.source);
    records.push_back(p.target);
  }
  std::stringstream buf;
  write_marker_log(buf, records);
  const auto back = read_marker_log(buf);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].camera, records[i].camera);
    EXPECT_EQ(back[i].timestamp, records[i].timestamp);
    EXPECT_LT(transform_error(back[i].pose, records[i].pose), 1e-12);
  }
  const auto reread = pair_by_index(back, CameraId::Cam1, CameraId::Cam2);
  EXPECT_LT(transform_error(estimate_extrinsic(reread).transform,
                            estimate_extrinsic(pairs).transform),
            1e-12);
}

TEST(MarkerLog, SkipsCommentsAndSnapsRoundedRotations) {
  std::istringstream in(
      "# header\n"
      "\n"
      "cam1 0.0  1 0 0  0 1 0  0 0 1  0.1 0.2 0.3   # trailing comment\n"
      "cam2 0.0  0.7071068 -0.7071068 0  0.7071068 0.7071068 0  0 0 1  1 2 3\n");
  const auto obs = read_marker_log(in);
  ASSERT_EQ(obs.size(), 2u);
  EXPECT_EQ(obs[0].camera, CameraId::Cam1);
  EXPECT_EQ(obs[1].camera, CameraId::Cam2);
  EXPECT_LT(orthonormality_residual(obs[1].pose.rotation()), 1e-12);
  EXPECT_NEAR(rotation_angle(obs[1].pose.rotation()), std::numbers::pi / 4, 1e-6);
}

TEST(MarkerLog, MalformedLinesReportLineNumber) {
  const auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      (void)read_marker_log(in);
    } catch (const std::runtime_error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(error_of("cam1 0 1 0 0 0 1 0 0 0 1 0 0\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("#\ncam3 0 1 0 0 0 1 0 0 0 1 0 0 0\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("cam1 0 2 0 0 0 1 0 0 0 1 0 0 0\n").find("rotation"), std::string::npos);
  EXPECT_NE(error_of("cam1 0 1 0 0 0 1 0 0 0 1 0 0 0 9\n").find("trailing"), std::string::npos);
}

TEST(MarkerLog, PairByIndexRejectsUnbalancedLogs) {
  const std::vector<MarkerObservation> obs{{CameraId::Cam1, {}, 0.0},
                                           {CameraId::Cam2, {}, 0.0},
                                           {CameraId::Cam1, {}, 0.1},
                                           {CameraId::External, {}, 0.1}};
  EXPECT_THROW((void)pair_by_index(obs, CameraId::Cam1, CameraId::Cam2),
               std::invalid_argument);
  const auto pairs = pair_by_index(obs, CameraId::Cam2, CameraId::External);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].target.timestamp, 0.1);
}

TEST(CameraId, ParseAndPrint) {
  for (CameraId id : {CameraId::Cam1, CameraId::Cam2, CameraId::External}) {
    EXPECT_EQ(parse_camera_id(to_string(id)), id);
  }
  EXPECT_THROW((void)parse_camera_id("cam9"), std::invalid_argument);
}

}  // namespace
}  // namespace fusionnav
