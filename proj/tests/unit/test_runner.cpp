#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fusionnav/runner.hpp"
#include "fusionnav/scenario.hpp"

namespace fusionnav {
namespace {

namespace fs = std::filesystem;

const fs::path kScenarios = FUSIONNAV_SCENARIO_DIR;

Scenario empty_room() {
  Scenario sc;
  sc.name = "empty-room";
  sc.static_map = load_static_map(kScenarios / "maps" / "room_15x10.map");
  sc.start = Pose2D(1.0, 1.0, 0.0);
  sc.goal = Vec2(6.0, 1.0);
  sc.max_duration = 40.0;
  sc.seed = 3;
  return sc;
}

std::string trajectory_text(const ScenarioResult& r) {
  std::ostringstream out;
  write_trajectory(out, r);
  return out.str();
}

std::map<std::string, std::string> parse_metrics(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

class EmptyRoomRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { result_ = new ScenarioResult(run_scenario(empty_room())); }
  static void TearDownTestSuite() {
    delete result_;
    result_ = nullptr;
  }
  static ScenarioResult* result_;
};

ScenarioResult* EmptyRoomRun::result_ = nullptr;

TEST_F(EmptyRoomRun, ReachesGoalOnNearStraightPath) {
  const ScenarioResult& r = *result_;
  ASSERT_TRUE(r.goal_reached()) << to_string(r.termination);
  EXPECT_EQ(exit_code(r), 0);
  EXPECT_LT(r.metrics.final_goal_distance, 0.2);
  EXPECT_GT(r.metrics.path_length, 4.8 - 1e-9);
  EXPECT_LT(r.metrics.path_length, 5.0 * 1.1);
  EXPECT_GE(r.metrics.min_clearance, r.robot_radius);
  EXPECT_EQ(r.metrics.min_seat_clearance, kClearanceSearchRadius);
}

TEST_F(EmptyRoomRun, TicksAreConsistent) {
  const ScenarioResult& r = *result_;
  ASSERT_FALSE(r.ticks.empty());
  EXPECT_EQ(r.metrics.ticks, r.ticks.size());
  for (std::size_t i = 0; i < r.ticks.size(); ++i) {
    EXPECT_NEAR(r.ticks[i].t, 0.1 * static_cast<double>(i), 1e-9);
  }
  EXPECT_EQ(r.ticks.front().ground_truth.position(), r.start.position());
  // Commands respect the acceleration limits of the scenario.
  const Scenario sc = empty_room();
  for (std::size_t i = 1; i + 1 < r.ticks.size(); ++i) {
    EXPECT_LE(std::abs(r.ticks[i].command.v - r.ticks[i - 1].command.v),
              sc.limits.acc_v * 0.1 + 1e-12);
  }
}

TEST_F(EmptyRoomRun, TrajectoryHasOneRowPerTick) {
  const std::string text = trajectory_text(*result_);
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x_gt,y_gt,theta_gt,x_est,y_est,theta_est,v,w,clearance");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
    ++rows;
  }
  EXPECT_EQ(rows, result_->ticks.size());
}

TEST_F(EmptyRoomRun, MetricsAreKeyValue) {
  std::ostringstream out;
  write_metrics(out, *result_);
  const auto kv = parse_metrics(out.str());
  EXPECT_EQ(kv.at("scenario"), "empty-room");
  EXPECT_EQ(kv.at("mode"), "fusion");
  EXPECT_EQ(kv.at("termination"), "goal_reached");
  EXPECT_EQ(kv.at("goal_reached"), "true");
  EXPECT_EQ(std::stoul(kv.at("ticks")), result_->ticks.size());
  for (const char* key : {"path_length", "duration", "mean_position_error", "min_clearance",
                          "mean_abs_error_x", "calibration_rotation_residual"}) {
    EXPECT_TRUE(kv.count(key)) << key;
  }
}

TEST_F(EmptyRoomRun, PlotIsWellFormedSvg) {
  std::ostringstream out;
  write_plot_svg(out, *result_);
  const std::string svg = out.str();
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\""), std::string::npos);
  EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
  for (const char* id : {"id=\"static\"", "id=\"lidar\"", "id=\"camera\"", "id=\"ground_truth\"",
                         "id=\"estimate\"", "id=\"goal\""}) {
    EXPECT_NE(svg.find(id), std::string::npos) << id;
  }
  // Every element is either self-closing or closed, so tags balance.
  std::size_t open = 0, close = 0, self = 0;
  for (std::size_t i = svg.find('<'); i != std::string::npos; i = svg.find('<', i + 1)) {
    const std::size_t end = svg.find('>', i);
    ASSERT_NE(end, std::string::npos);
    if (svg[i + 1] == '?') continue;
    if (svg[i + 1] == '/') {
      ++close;
    } else if (svg[end - 1] == '/') {
      ++self;
    } else {
      ++open;
    }
  }
  EXPECT_EQ(open, close);
  EXPECT_GT(self, 3u);
}

TEST_F(EmptyRoomRun, EmitWritesThreeFiles) {
  const fs::path dir = fs::temp_directory_path() / "fusionnav_emit_test";
  fs::remove_all(dir);
  emit_outputs(*result_, OutputPaths::in(dir / "nested"));
  for (const char* name : {"trajectory.csv", "metrics.txt", "plot.svg"}) {
    EXPECT_TRUE(fs::is_regular_file(dir / "nested" / name)) << name;
  }
  std::ifstream in(dir / "nested" / "trajectory.csv", std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), trajectory_text(*result_));
  fs::remove_all(dir);
}

TEST(Runner, SameSeedIsByteIdentical) {
  Scenario sc = empty_room();
  sc.max_duration = 3.0;
  const std::string a = trajectory_text(run_scenario(sc));
  const std::string b = trajectory_text(run_scenario(sc));
  EXPECT_EQ(a, b);
  sc.seed = 4;
  EXPECT_NE(a, trajectory_text(run_scenario(sc)));
}

TEST(Runner, TimesOut) {
  Scenario sc = empty_room();
  sc.max_duration = 1.0;
  const ScenarioResult r = run_scenario(sc);
  EXPECT_TRUE(r.timed_out());
  EXPECT_EQ(exit_code(r), 3);
  EXPECT_EQ(r.ticks.size(), 11u);
}

TEST(Runner, StartingTooCloseToAWallIsACollision) {
  Scenario sc = empty_room();
  sc.start = Pose2D(0.2, 1.0, 0.0);  // 0.15 m from the wall face
  const ScenarioResult r = run_scenario(sc);
  EXPECT_TRUE(r.collided());
  EXPECT_EQ(exit_code(r), 2);
  EXPECT_LT(r.metrics.min_clearance, r.robot_radius);
}

TEST(Runner, InvalidScenarioListsViolations) {
  Scenario sc = empty_room();
  sc.goal = Vec2(100, 100);
  sc.robot_radius = -1.0;
  try {
    (void)run_scenario(sc);
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.violations().size(), 2u);
  }
}

TEST(Runner, EmitReportsUnwritablePath) {
  const fs::path blocker = fs::temp_directory_path() / "fusionnav_blocker";
  { std::ofstream(blocker) << "x"; }
  ScenarioResult r;
  try {
    emit_outputs(r, OutputPaths::in(blocker / "out"));
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("fusionnav_blocker"), std::string::npos);
  }
  fs::remove(blocker);
}

TEST(Runner, SeatClearanceOnlyCountsChairs) {
  Chair chair;
  chair.center = Vec2(2, 2);
  const std::vector<Obstacle> obstacles{Box{{1, 2}, {0.2, 0.2}, 1.0}, chair};
  EXPECT_NEAR(seat_clearance(obstacles, {3, 2}), 1.0 - 0.225, 1e-12);
  EXPECT_EQ(seat_clearance({Box{}}, {0, 0}), kClearanceSearchRadius);
}

TEST(CompareModes, EmptyRoomBothReachGoalOnSimilarPaths) {
  Scenario sc = empty_room();
  const ModeComparison c = compare_modes(sc);
  EXPECT_EQ(c.lidar.mode, FusionMode::LidarOnly);
  EXPECT_EQ(c.fusion.mode, FusionMode::Fusion);
  ASSERT_TRUE(c.lidar.goal_reached());
  ASSERT_TRUE(c.fusion.goal_reached());
  const double a = c.lidar.metrics.path_length;
  const double b = c.fusion.metrics.path_length;
  EXPECT_LT(std::abs(a - b), 0.05 * std::min(a, b));
  EXPECT_EQ(c.verdict, "both modes reached the goal");

  std::ostringstream out;
  write_comparison(out, c);
  EXPECT_EQ(out.str().rfind("metric,lidar,fusion,delta\n", 0), 0u);
  EXPECT_NE(out.str().find("path_length,"), std::string::npos);
  EXPECT_NE(out.str().find("verdict: both modes reached the goal"), std::string::npos);
}

TEST(CompareModes, FullHeightBoxAvoidedByBothModes) {
  const Scenario sc = load_scenario(kScenarios / "box-corridor.yaml");
  const ModeComparison c = compare_modes(sc);
  EXPECT_TRUE(c.lidar.goal_reached()) << to_string(c.lidar.termination);
  EXPECT_TRUE(c.fusion.goal_reached()) << to_string(c.fusion.termination);
  EXPECT_GE(c.lidar.metrics.min_clearance, sc.robot_radius);
  EXPECT_GE(c.fusion.metrics.min_clearance, sc.robot_radius);
}

}  // namespace
}  // namespace fusionnav
