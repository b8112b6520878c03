#include "fusionnav/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fusionnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double rect_distance(const Vec2& p, const Vec2& center, const Vec2& size) {
  const Vec2 excess = ((p - center).cwiseAbs() - 0.5 * size).cwiseMax(0.0);
  return excess.norm();
}

// Smallest non-negative root of a t^2 + b t + c = 0, or +inf.
double smallest_root(double a, double b, double c) {
  if (a == 0.0) return kInf;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return kInf;
  const double sq = std::sqrt(disc);
  const double t0 = (-b - sq) / (2.0 * a);
  const double t1 = (-b + sq) / (2.0 * a);
  if (t0 >= 0.0) return t0;
  if (t1 >= 0.0) return t1;
  return kInf;
}

template <int N>
double ray_slab(const Eigen::Matrix<double, N, 1>& origin,
                const Eigen::Matrix<double, N, 1>& dir,
                const Eigen::Matrix<double, N, 1>& lo,
                const Eigen::Matrix<double, N, 1>& hi) {
  double t_enter = 0.0;
  double t_exit = kInf;
  for (int i = 0; i < N; ++i) {
    if (dir(i) == 0.0) {
      if (origin(i) < lo(i) || origin(i) > hi(i)) return kInf;
      continue;
    }
    double t0 = (lo(i) - origin(i)) / dir(i);
    double t1 = (hi(i) - origin(i)) / dir(i);
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return kInf;
  }
  return t_enter;
}

}  // namespace

std::array<Vec2, 4> Chair::leg_centers() const {
  const Vec2 half = 0.5 * seat_size - Vec2::Constant(leg_inset);
  return {center + Vec2(half.x(), half.y()), center + Vec2(-half.x(), half.y()),
          center + Vec2(-half.x(), -half.y()), center + Vec2(half.x(), -half.y())};
}

void Person::reset() {
  if (waypoints.empty()) {
    throw std::invalid_argument("person needs at least one waypoint");
  }
  position = waypoints.front();
  next_waypoint = waypoints.size() > 1 ? 1 : 0;
}

void Person::advance(double dt) {
  if (waypoints.size() < 2 || next_waypoint >= waypoints.size()) return;
  double remaining = speed * dt;
  // Bounded so a looped path of coincident waypoints cannot spin forever.
  for (std::size_t hops = 0; remaining > 0.0 && hops <= 2 * waypoints.size();
       ++hops) {
    const Vec2 delta = waypoints[next_waypoint] - position;
    const double gap = delta.norm();
    if (gap > remaining) {
      position += delta * (remaining / gap);
      return;
    }
    position = waypoints[next_waypoint];
    remaining -= gap;
    ++next_waypoint;
    if (next_waypoint == waypoints.size()) {
      if (!loop) return;
      next_waypoint = 0;
    }
  }
}

double footprint_distance(const Obstacle& obstacle, const Vec2& p) {
  return std::visit(
      [&](const auto& o) -> double {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Box>) {
          return rect_distance(p, o.center, o.size);
        } else if constexpr (std::is_same_v<T, Chair>) {
          double d = rect_distance(p, o.center, o.seat_size);
          for (const auto& leg : o.leg_centers()) {
            d = std::min(d, std::max((p - leg).norm() - o.leg_radius, 0.0));
          }
          return d;
        } else {
          return std::max((p - o.position).norm() - o.radius, 0.0);
        }
      },
      obstacle);
}

World::World(StaticLayer static_map, std::vector<Obstacle> obstacles)
    : static_map_(std::move(static_map)), obstacles_(std::move(obstacles)) {
  const GridSpec& spec = static_map_.spec();
  wall_distance_ =
      squared_distance_transform(spec.width, spec.height, static_map_.cells());
  for (double& d : wall_distance_) d = std::sqrt(d) * spec.resolution;
  for (auto& o : obstacles_) {
    if (auto* person = std::get_if<Person>(&o)) person->reset();
  }
}

Vec2 World::bounds_min() const { return static_map_.spec().origin; }

Vec2 World::bounds_max() const {
  const GridSpec& s = static_map_.spec();
  return s.origin + Vec2(s.width, s.height) * s.resolution;
}

bool World::in_bounds(const Vec2& p) const {
  const Vec2 lo = bounds_min();
  const Vec2 hi = bounds_max();
  return p.x() >= lo.x() && p.y() >= lo.y() && p.x() <= hi.x() &&
         p.y() <= hi.y();
}

void World::advance(double dt) {
  for (auto& o : obstacles_) {
    if (auto* person = std::get_if<Person>(&o)) person->advance(dt);
  }
}

double World::clearance(const Vec2& p) const {
  double best = kClearanceSearchRadius;
  const GridSpec& spec = static_map_.spec();
  const Cell c = spec.cell_of(p);
  const int reach =
      static_cast<int>(std::ceil(kClearanceSearchRadius / spec.resolution));
  const int x0 = std::max(0, c.x - reach);
  const int x1 = std::min(spec.width - 1, c.x + reach);
  const int y0 = std::max(0, c.y - reach);
  const int y1 = std::min(spec.height - 1, c.y + reach);
  const Vec2 half = Vec2::Constant(0.5 * spec.resolution);
  const auto cells = static_map_.cells();
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (cells[spec.index({x, y})] == 0) continue;
      const Vec2 center =
          spec.origin + Vec2(x + 0.5, y + 0.5) * spec.resolution;
      const Vec2 excess = ((p - center).cwiseAbs() - half).cwiseMax(0.0);
      best = std::min(best, excess.norm());
    }
  }
  for (const auto& o : obstacles_) {
    best = std::min(best, footprint_distance(o, p));
  }
  return best;
}

double World::raycast_static(const Vec2& origin, const Vec2& dir,
                             double max_distance) const {
  const GridSpec& spec = static_map_.spec();
  Cell cell = spec.cell_of(origin);
  if (!spec.contains(cell)) return kInf;
  const auto cells = static_map_.cells();
  if (cells[spec.index(cell)] != 0) return 0.0;

  // Skip ahead while the wall distance field guarantees free cells. A
  // point within s of the cell center is at least d - sqrt(2) res from
  // any wall cell.
  const double res = spec.resolution;
  const double margin = std::sqrt(2.0) * res;
  double skipped = 0.0;
  Vec2 start = origin;
  while (true) {
    const double step = wall_distance_[spec.index(cell)] - margin;
    if (step < res) break;
    if (skipped + step > max_distance) return kInf;
    skipped += step;
    start = origin + skipped * dir;
    cell = spec.cell_of(start);
    if (!spec.contains(cell)) return kInf;
  }

  const Vec2 g = spec.to_grid(start);
  const int step_x = dir.x() > 0.0 ? 1 : (dir.x() < 0.0 ? -1 : 0);
  const int step_y = dir.y() > 0.0 ? 1 : (dir.y() < 0.0 ? -1 : 0);
  const double delta_x = step_x != 0 ? res / std::abs(dir.x()) : kInf;
  const double delta_y = step_y != 0 ? res / std::abs(dir.y()) : kInf;
  double t_x = step_x > 0   ? (cell.x + 1 - g.x()) * res / dir.x()
               : step_x < 0 ? (g.x() - cell.x) * res / -dir.x()
                            : kInf;
  double t_y = step_y > 0   ? (cell.y + 1 - g.y()) * res / dir.y()
               : step_y < 0 ? (g.y() - cell.y) * res / -dir.y()
                            : kInf;
  while (true) {
    double t;
    if (t_x < t_y) {
      t = t_x;
      cell.x += step_x;
      t_x += delta_x;
    } else {
      t = t_y;
      cell.y += step_y;
      t_y += delta_y;
    }
    if (skipped + t > max_distance || !spec.contains(cell)) return kInf;
    if (cells[spec.index(cell)] != 0) return skipped + t;
  }
}

double ray_circle(const Vec2& origin, const Vec2& dir, const Vec2& center,
                  double radius) {
  const Vec2 oc = origin - center;
  const double c = oc.squaredNorm() - radius * radius;
  if (c <= 0.0) return 0.0;
  return smallest_root(dir.squaredNorm(), 2.0 * oc.dot(dir), c);
}

double ray_rect(const Vec2& origin, const Vec2& dir, const Vec2& lo,
                const Vec2& hi) {
  return ray_slab<2>(origin, dir, lo, hi);
}

double ray_aabb(const Vec3& origin, const Vec3& dir, const Vec3& lo,
                const Vec3& hi) {
  return ray_slab<3>(origin, dir, lo, hi);
}

double ray_cylinder(const Vec3& origin, const Vec3& dir, const Vec2& center,
                    double radius, double height) {
  const Vec2 oc(origin.x() - center.x(), origin.y() - center.y());
  const Vec2 d2(dir.x(), dir.y());
  const bool inside_xy = oc.squaredNorm() <= radius * radius;
  if (inside_xy && origin.z() >= 0.0 && origin.z() <= height) return 0.0;

  double best = kInf;
  if (!inside_xy) {
    const double a = d2.squaredNorm();
    const double b = 2.0 * oc.dot(d2);
    const double c = oc.squaredNorm() - radius * radius;
    const double t = smallest_root(a, b, c);
    if (std::isfinite(t)) {
      const double z = origin.z() + t * dir.z();
      if (z >= 0.0 && z <= height) best = t;
    }
  }
  if (dir.z() != 0.0) {
    for (const double cap_z : {height, 0.0}) {
      const double t = (cap_z - origin.z()) / dir.z();
      if (t < 0.0 || t >= best) continue;
      const Vec2 at = oc + t * d2;
      if (at.squaredNorm() <= radius * radius) best = t;
    }
  }
  return best;
}

}  // namespace fusionnav
