#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fusionnav/planner.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace fusionnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

InflatedMap open_field(double radius = 0.3) {
  return inflate(MultiLayerMap(make_walled_map(20.0, 20.0, 0.05)), radius);
}

TEST(StepKinematics, Examples) {
  const Pose2D a = step_kinematics({0, 0, 0}, {1, 0}, 0.1);
  EXPECT_NEAR(a.x(), 0.1, 1e-15);
  EXPECT_NEAR(a.y(), 0.0, 1e-15);
  const Pose2D b = step_kinematics({0, 0, kPi / 2}, {1, 0}, 0.1);
  EXPECT_NEAR(b.x(), 0.0, 1e-15);
  EXPECT_NEAR(b.y(), 0.1, 1e-15);
  EXPECT_NEAR(b.theta(), kPi / 2, 1e-15);
  EXPECT_THROW((void)step_kinematics({}, {1, 0}, 0.0), std::invalid_argument);
}

TEST(StepKinematics, ForwardStepsConvergeToTheArc) {
  // Unit-radius circle centered at (0, 1), followed for 0.5 rad.
  const Pose2D exact(std::sin(0.5), 1.0 - std::cos(0.5), 0.5);
  const auto error_with = [&](int steps) {
    Pose2D p;
    for (int i = 0; i < steps; ++i) p = step_kinematics(p, {0.5, 0.5}, 1.0 / steps);
    EXPECT_NEAR(p.theta(), 0.5, 1e-12);
    return (p.position() - exact.position()).norm();
  };
  const double coarse = error_with(10);
  const double fine = error_with(20);
  EXPECT_LT(coarse, 0.02);
  EXPECT_NEAR(coarse / fine, 2.0, 0.1);  // first order in dt
}

TEST(ArcPose, ClosedFormAgreesWithFineIntegration) {
  testing::Engine rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Pose2D start(testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2),
                       testing::uniform(rng, -3, 3));
    const VelocityCommand cmd{testing::uniform(rng, 0, 1), testing::uniform(rng, -1, 1)};
    Pose2D p = start;
    for (int i = 0; i < 20000; ++i) p = step_kinematics(p, cmd, 1e-4);
    const Pose2D q = arc_pose(start, cmd, 2.0);
    EXPECT_LT((p.position() - q.position()).norm(), 1e-3);
    EXPECT_NEAR(normalize_angle(p.theta() - q.theta()), 0.0, 1e-9);
  }
  const Pose2D straight = arc_pose({1, 2, kPi / 2}, {0.5, 0.0}, 2.0);
  EXPECT_NEAR(straight.x(), 1.0, 1e-12);
  EXPECT_NEAR(straight.y(), 3.0, 1e-12);
}

TEST(DynamicWindow, Examples) {
  RobotLimits limits;
  limits.v_max = 1.0;
  limits.acc_v = limits.dec_v = 0.5;
  const WindowBounds from_rest = dynamic_window({0, 0}, limits, 0.1);
  EXPECT_DOUBLE_EQ(from_rest.v_lo, 0.0);
  EXPECT_DOUBLE_EQ(from_rest.v_hi, 0.05);

  const WindowBounds at_max = dynamic_window({1.0, 0}, limits, 0.1);
  EXPECT_DOUBLE_EQ(at_max.v_lo, 0.95);
  EXPECT_DOUBLE_EQ(at_max.v_hi, 1.0);

  limits.v_min = 0.5;
  limits.acc_v = 0.001;
  EXPECT_TRUE(dynamic_window({0.0, 0}, limits, 0.1).empty());
}

TEST(Rollout, EmptyMapIsClear) {
  const InflatedMap map = open_field();
  EXPECT_EQ(rollout_distance_to_collision({10, 10, 0}, {0.5, 0}, map, 2.0), kInf);
  EXPECT_EQ(rollout_distance_to_collision({10, 10, 0}, {0.0, 0.5}, map, 2.0), kInf);
}

TEST(Rollout, WallAheadAtOneMeter) {
  // Obstacle cells whose inflated edge sits 1 m ahead of the robot.
  StaticLayer layer = make_walled_map(20.0, 20.0, 0.05);
  const double r_e = 0.3;
  const double face = 10.0 + 1.0 + r_e;  // x of the nearest obstacle cell center
  const int col = static_cast<int>(std::floor(face / 0.05));
  for (int y = 1; y < 399; ++y) layer.set_occupied({col, y}, true);
  const InflatedMap map = inflate(MultiLayerMap(layer), r_e);
  const double d = rollout_distance_to_collision({10.0, 10.0, 0}, {0.5, 0}, map, 4.0);
  EXPECT_NEAR(d, 1.0, 0.05);
}

TEST(Rollout, StartInCollisionReturnsZero) {
  const InflatedMap map = open_field();
  EXPECT_EQ(rollout_distance_to_collision({0.1, 0.1, 0}, {0.5, 0}, map, 2.0), 0.0);
  EXPECT_EQ(rollout_distance_to_collision({0.1, 0.1, 0}, {0.0, 0.5}, map, 2.0), 0.0);
  EXPECT_THROW((void)rollout_distance_to_collision({5, 5, 0}, {0.5, 0}, map, 0.0),
               std::invalid_argument);
}

TEST(Admissible, Examples) {
  const RobotLimits limits;
  EXPECT_TRUE(admissible({0, 0}, 0.0, limits));
  EXPECT_FALSE(admissible({0.01, 0}, 0.0, limits));
  EXPECT_FALSE(admissible({0, 0.01}, 0.0, limits));
  EXPECT_TRUE(admissible({limits.v_max, limits.w_max}, kInf, limits));
  EXPECT_TRUE(admissible({1.0, 0}, 1.0, limits));
  EXPECT_FALSE(admissible({std::nextafter(1.0, 2.0), 0}, 1.0, limits));
}

TEST(Scores, Examples) {
  EXPECT_DOUBLE_EQ(heading_score({0, 0, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(heading_score({0, 0, 0}, {-1, 0}), 0.0);
  EXPECT_DOUBLE_EQ(heading_score({0, 0, 0}, {0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(heading_score({1, 1, 2.0}, {1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(dist_score(0.5, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(dist_score(kInf, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(dist_score(0.0, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(dist_score(0.15, 0.3), 0.5);
  EXPECT_DOUBLE_EQ(vel_score(0.6, 0.6), 1.0);
  EXPECT_DOUBLE_EQ(vel_score(0.0, 0.6), 0.0);
  EXPECT_DOUBLE_EQ(vel_score(0.3, 0.6), 0.5);
  EXPECT_THROW((void)dist_score(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW((void)vel_score(1.0, 0.0), std::invalid_argument);
}

TEST(Scores, StayInUnitInterval) {
  testing::Engine rng(52);
  for (int i = 0; i < 10000; ++i) {
    const Pose2D end(testing::uniform(rng, -20, 20), testing::uniform(rng, -20, 20),
                     testing::uniform(rng, -10, 10));
    const Vec2 goal(testing::uniform(rng, -20, 20), testing::uniform(rng, -20, 20));
    const double h = heading_score(end, goal);
    const double r = testing::uniform(rng, 0.01, 1.0);
    const double d = dist_score(i % 7 == 0 ? kInf : testing::uniform(rng, 0, 20), r);
    const double v_max = testing::uniform(rng, 0.01, 2.0);
    const double v = vel_score(testing::uniform(rng, 0, v_max), v_max);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, 1.0);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(WindowSample, EndpointsExact) {
  EXPECT_EQ(window_sample(0.1, 0.7, 0, 5), 0.1);
  EXPECT_EQ(window_sample(0.1, 0.7, 4, 5), 0.7);
  EXPECT_DOUBLE_EQ(window_sample(0.0, 1.0, 1, 5), 0.25);
}

TEST(SelectVelocity, OpenFieldDrivesStraightAtGoal) {
  const InflatedMap map = open_field();
  const RobotLimits limits;
  DwaConfig config;
  config.alpha = config.beta = config.gamma = 1.0;
  const VelocityCommand current{0.3, 0.0};
  const Selection sel = select_velocity({{5, 10, 0}, current}, {15, 10}, map, limits, config);
  EXPECT_FALSE(sel.diagnostics.emergency);
  EXPECT_EQ(sel.best.w, 0.0);
  EXPECT_EQ(sel.best.v, dynamic_window(current, limits, config.dt).v_hi);
  EXPECT_EQ(sel.diagnostics.candidates, 21u * 41u);
}

TEST(SelectVelocity, WallAtContactGivesEmergencyStop) {
  const InflatedMap map = open_field();
  const RobotLimits limits;
  const DwaConfig config;
  const Selection sel =
      select_velocity({{0.2, 10, 0}, {0.2, 0.0}}, {15, 10}, map, limits, config);
  EXPECT_TRUE(sel.diagnostics.emergency);
  EXPECT_EQ(sel.best, (VelocityCommand{0, 0}));
  EXPECT_EQ(sel.diagnostics.admissible, 0u);
}

TEST(SelectVelocity, ResultInsideWindowAndAdmissible) {
  testing::Engine rng(53);
  const RobotLimits limits;
  DwaConfig config;
  config.v_samples = 7;
  config.w_samples = 11;
  for (int trial = 0; trial < 100; ++trial) {
    const MultiLayerMap layers = testing::random_layered_map(rng, 60, 60);
    const InflatedMap map = inflate(layers, config.expanded_radius);
    const Pose2D pose(testing::uniform(rng, 0.3, 2.7), testing::uniform(rng, 0.3, 2.7),
                      testing::uniform(rng, -kPi, kPi));
    const VelocityCommand current = testing::random_command(rng, limits);
    const Vec2 goal(testing::uniform(rng, 0, 3), testing::uniform(rng, 0, 3));
    const Selection sel = select_velocity({pose, current}, goal, map, limits, config);
    if (sel.diagnostics.emergency) {
      EXPECT_EQ(sel.best, (VelocityCommand{0, 0}));
      continue;
    }
    EXPECT_TRUE(sel.diagnostics.window.contains(sel.best));
    const double dis = rollout_distance_to_collision(pose, sel.best, map, config.horizon);
    EXPECT_TRUE(admissible(sel.best, dis, limits));
    EXPECT_GE(sel.score, 0.0);
    EXPECT_LE(sel.score, config.alpha + config.beta + config.gamma);
  }
}

TEST(SelectVelocity, HeadingOnlyPicksMinimalHeadingError) {
  testing::Engine rng(54);
  const InflatedMap map = open_field();
  const RobotLimits limits;
  DwaConfig config;
  config.beta = config.gamma = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Pose2D pose(10, 10, testing::uniform(rng, -kPi, kPi));
    const Vec2 goal(testing::uniform(rng, 2, 18), testing::uniform(rng, 2, 18));
    const VelocityCommand current = testing::random_command(rng, limits);
    const Selection sel = select_velocity({pose, current}, goal, map, limits, config);
    const WindowBounds w = sel.diagnostics.window;
    const double best = heading_score(arc_pose(pose, sel.best, config.horizon), goal);
    for (int i = 0; i < config.v_samples; ++i) {
      for (int j = 0; j < config.w_samples; ++j) {
        const VelocityCommand c{window_sample(w.v_lo, w.v_hi, i, config.v_samples),
                                window_sample(w.w_lo, w.w_hi, j, config.w_samples)};
        EXPECT_LE(heading_score(arc_pose(pose, c, config.horizon), goal), best);
      }
    }
  }
}

TEST(SelectVelocity, MatchesBruteForceOracle) {
  testing::Engine rng(55);
  const RobotLimits limits;
  const DwaConfig config;
  for (int trial = 0; trial < 25; ++trial) {
    const MultiLayerMap layers = testing::random_layered_map(rng, 60, 60);
    const InflatedMap map = inflate(layers, config.expanded_radius);
    const Pose2D pose(testing::uniform(rng, 0.3, 2.7), testing::uniform(rng, 0.3, 2.7),
                      testing::uniform(rng, -kPi, kPi));
    const VelocityCommand current = testing::random_command(rng, limits);
    const Vec2 goal(testing::uniform(rng, 0, 3), testing::uniform(rng, 0, 3));
    const Selection sel = select_velocity({pose, current}, goal, map, limits, config);
    const auto oracle = testing::brute_force_select(pose, current, goal, map, limits, config);
    EXPECT_EQ(sel.diagnostics.emergency, oracle.emergency);
    EXPECT_EQ(sel.diagnostics.candidates, oracle.candidates);
    EXPECT_EQ(sel.diagnostics.admissible, oracle.admissible);
    EXPECT_EQ(sel.best, oracle.command);
    EXPECT_NEAR(sel.score, oracle.score, 1e-12);
  }
}

TEST(SelectVelocity, TieBreakPrefersFasterThenStraighter) {
  // With only vel weighted, every command at the top speed ties on G; the
  // one with the smallest |w| wins.
  const InflatedMap map = open_field();
  const RobotLimits limits;
  DwaConfig config;
  config.alpha = config.beta = 0.0;
  config.gamma = 1.0;
  const Selection sel =
      select_velocity({{10, 10, 0}, {0.25, 0.3}}, {15, 10}, map, limits, config);
  const WindowBounds w = sel.diagnostics.window;
  EXPECT_EQ(sel.best.v, w.v_hi);
  double smallest = kInf;
  for (int j = 0; j < config.w_samples; ++j) {
    smallest = std::min(smallest, std::abs(window_sample(w.w_lo, w.w_hi, j, config.w_samples)));
  }
  EXPECT_EQ(std::abs(sel.best.w), smallest);
}

TEST(Config, ValidateRejectsBadValues) {
  RobotLimits limits;
  limits.v_max = -1;
  EXPECT_THROW(limits.validate(), std::invalid_argument);
  DwaConfig config;
  config.v_samples = 1;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = {};
  config.alpha = config.beta = config.gamma = 0.0;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = {};
  config.horizon = 0.01;
  EXPECT_THROW(config.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace fusionnav
