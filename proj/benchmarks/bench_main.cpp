#include <benchmark/benchmark.h>

#include <filesystem>

#include "fusionnav/planner.hpp"
#include "fusionnav/scenario.hpp"
#include "fusionnav/sensors.hpp"
#include "fusionnav/world.hpp"

namespace {

using namespace fusionnav;

const Scenario& chair_room() {
  static const Scenario sc =
      load_scenario(std::filesystem::path(FUSIONNAV_SCENARIO_DIR) / "chair-room.yaml");
  return sc;
}

World chair_world() { return World(chair_room().static_map, chair_room().obstacles); }

void BM_Inflate(benchmark::State& state) {
  const MultiLayerMap map(chair_room().static_map);
  for (auto _ : state) benchmark::DoNotOptimize(inflate(map, chair_room().planner.expanded_radius));
}
BENCHMARK(BM_Inflate)->Unit(benchmark::kMillisecond);

void BM_SelectVelocity(benchmark::State& state) {
  const Scenario& sc = chair_room();
  const InflatedMap map = inflate(MultiLayerMap(sc.static_map), sc.planner.expanded_radius);
  const PlannerState start{sc.start, {0.1, 0.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_velocity(start, sc.goal, map, sc.limits, sc.planner));
  }
}
BENCHMARK(BM_SelectVelocity)->Unit(benchmark::kMillisecond);

void BM_RaycastLidar(benchmark::State& state) {
  const World world = chair_world();
  std::uint64_t tick = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(raycast_lidar(world, chair_room().start, chair_room().lidar, 1, tick++));
  }
}
BENCHMARK(BM_RaycastLidar)->Unit(benchmark::kMicrosecond);

void BM_RenderDepthCloud(benchmark::State& state) {
  const World world = chair_world();
  std::uint64_t tick = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_depth_cloud(world, chair_room().start, chair_room().camera_left,
                                                FrameId::Camera1, 1, tick++));
  }
}
BENCHMARK(BM_RenderDepthCloud)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
