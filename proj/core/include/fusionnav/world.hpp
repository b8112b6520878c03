/*
 * world.hpp
 *
 * Simulated environment: static walls from a grid map plus parameterized
 * 3D obstacles. Walls are full-height prisms over occupied static cells;
 * the floor is the plane z = 0.
 */

#ifndef FUSIONNAV_WORLD_HPP
#define FUSIONNAV_WORLD_HPP

#include <array>
#include <variant>
#include <vector>

#include "fusionnav/costmap.hpp"
#include "fusionnav/geometry.hpp"

namespace fusionnav {

/// Axis-aligned box standing on the floor.
struct Box {
  Vec2 center = Vec2::Zero();
  Vec2 size = Vec2(0.5, 0.5);
  double height = 0.5;
};

/// Seat slab on four vertical legs. Legs sit `leg_inset` in from the seat
/// edges, so the seat overhangs the leg span whenever the inset exceeds
/// the leg radius.
struct Chair {
  Vec2 center = Vec2::Zero();
  Vec2 seat_size = Vec2(0.45, 0.45);
  double seat_lo = 0.42;
  double seat_hi = 0.48;
  double leg_radius = 0.02;
  double leg_height = 0.42;
  double leg_inset = 0.16;

  [[nodiscard]] std::array<Vec2, 4> leg_centers() const;
};

/// Upright cylinder walking a waypoint path at constant speed.
struct Person {
  double radius = 0.25;
  double height = 1.7;
  double speed = 0.5;  ///< [m/s]
  bool loop = false;
  std::vector<Vec2> waypoints;

  // Simulation state.
  Vec2 position = Vec2::Zero();
  std::size_t next_waypoint = 1;

  /// Places the person at the first waypoint.
  void reset();
  /// Walks speed * dt along the path.
  void advance(double dt);
};

using Obstacle = std::variant<Box, Chair, Person>;

/// Distance from a point to the obstacle's ground footprint (0 inside).
/// A chair's footprint is its seat rectangle.
[[nodiscard]] double footprint_distance(const Obstacle& obstacle, const Vec2& p);

/// Search radius of World::clearance(); farther clearances report this.
inline constexpr double kClearanceSearchRadius = 2.0;

class World {
 public:
  World(StaticLayer static_map, std::vector<Obstacle> obstacles);

  [[nodiscard]] const StaticLayer& static_map() const { return static_map_; }
  [[nodiscard]] const std::vector<Obstacle>& obstacles() const {
    return obstacles_;
  }
  [[nodiscard]] Vec2 bounds_min() const;
  [[nodiscard]] Vec2 bounds_max() const;
  [[nodiscard]] bool in_bounds(const Vec2& p) const;

  /// Moves every person obstacle forward by dt.
  void advance(double dt);

  /// Distance from p to the nearest wall cell or obstacle footprint, capped
  /// at kClearanceSearchRadius.
  [[nodiscard]] double clearance(const Vec2& p) const;

  /**
   * Distance along a planar unit direction until the ray enters an
   * occupied static cell, or +inf if none is met within max_distance or
   * the ray leaves the grid. Returns 0 if the origin cell is occupied.
   */
  [[nodiscard]] double raycast_static(const Vec2& origin, const Vec2& dir,
                                      double max_distance) const;

 private:
  StaticLayer static_map_;
  std::vector<Obstacle> obstacles_;
  std::vector<double> wall_distance_;  ///< cell center to nearest wall cell center [m]
};

// Ray/primitive intersections. Each returns the smallest t >= 0 along
// origin + t * dir, or +inf when there is no hit.
[[nodiscard]] double ray_circle(const Vec2& origin, const Vec2& dir,
                                const Vec2& center, double radius);
[[nodiscard]] double ray_rect(const Vec2& origin, const Vec2& dir,
                              const Vec2& lo, const Vec2& hi);
[[nodiscard]] double ray_aabb(const Vec3& origin, const Vec3& dir,
                              const Vec3& lo, const Vec3& hi);
/// Vertical cylinder over z in [0, height], including its top cap.
[[nodiscard]] double ray_cylinder(const Vec3& origin, const Vec3& dir,
                                  const Vec2& center, double radius,
                                  double height);

}  // namespace fusionnav

#endif  // FUSIONNAV_WORLD_HPP
