// Seeded input generators for property tests. Every generator takes the
// engine by reference so a test case is reproducible from its seed alone.

#ifndef FUSIONNAV_TESTS_GENERATORS_HPP
#define FUSIONNAV_TESTS_GENERATORS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "fusionnav/costmap.hpp"
#include "fusionnav/geometry.hpp"
#include "fusionnav/planner.hpp"

namespace fusionnav::testing {

using Engine = std::mt19937_64;

inline double uniform(Engine& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Engine& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Vec3 unit_vector(Engine& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Mat3 random_rotation(Engine& rng) {
  return rotation_about_axis(unit_vector(rng), uniform(rng, -std::numbers::pi, std::numbers::pi))
      .rotation();
}

inline RigidTransform random_transform(Engine& rng, double extent = 5.0) {
  return {random_rotation(rng),
          Vec3(uniform(rng, -extent, extent), uniform(rng, -extent, extent),
               uniform(rng, -extent, extent))};
}

/// Walled grid with a handful of random rectangular blobs in the interior.
inline StaticLayer random_static_map(Engine& rng, int width, int height, int blobs) {
  StaticLayer layer = make_walled_map(width * 0.05, height * 0.05, 0.05);
  for (int b = 0; b < blobs; ++b) {
    const int x0 = uniform_int(rng, 1, width - 2);
    const int y0 = uniform_int(rng, 1, height - 2);
    const int w = uniform_int(rng, 1, 4);
    const int h = uniform_int(rng, 1, 4);
    for (int y = y0; y < std::min(height - 1, y0 + h); ++y) {
      for (int x = x0; x < std::min(width - 1, x0 + w); ++x) {
        layer.set_occupied({x, y}, true);
      }
    }
  }
  return layer;
}

/// Random map layers: static blobs plus sparse LiDAR and camera marks.
inline MultiLayerMap random_layered_map(Engine& rng, int width, int height) {
  MultiLayerMap map(random_static_map(rng, width, height, uniform_int(rng, 0, 6)));
  const int marks = uniform_int(rng, 0, 12);
  for (int i = 0; i < marks; ++i) {
    const Cell c{uniform_int(rng, 1, width - 2), uniform_int(rng, 1, height - 2)};
    const auto cost = static_cast<std::uint8_t>(uniform_int(rng, 0, 255));
    if (i % 2 == 0) {
      map.lidar().set(c, cost);
    } else {
      map.camera().set(c, cost);
    }
  }
  return map;
}

inline VelocityCommand random_command(Engine& rng, const RobotLimits& limits) {
  return {uniform(rng, limits.v_min, limits.v_max), uniform(rng, limits.w_min, limits.w_max)};
}

}  // namespace fusionnav::testing

#endif  // FUSIONNAV_TESTS_GENERATORS_HPP
