/*
 * costmap.hpp
 *
 * Three-layer fusion map: a binary static layer plus LiDAR and camera cost
 * layers (0-255) on one shared grid. A cell is free only when the static
 * layer is 0 and both cost layers are below 128.
 */

#ifndef FUSIONNAV_COSTMAP_HPP
#define FUSIONNAV_COSTMAP_HPP

#include <cmath>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fusionnav/geometry.hpp"
#include "fusionnav/projection.hpp"

namespace fusionnav {

struct Cell {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct GridSpec {
  double resolution = 0.05;  ///< [m/cell]
  Vec2 origin = Vec2::Zero();  ///< world position of the (0,0) cell corner
  int width = 1;
  int height = 1;

  /// Throws std::invalid_argument unless resolution > 0 and width, height >= 1.
  void validate() const;
  [[nodiscard]] bool contains(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
  }
  [[nodiscard]] std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(c.x);
  }
  [[nodiscard]] std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  /// Continuous grid coordinates (cells) of a world point.
  [[nodiscard]] Vec2 to_grid(const Vec2& p) const {
    return (p - origin) / resolution;
  }
  /// Cell containing the point, whether or not it is inside the grid.
  [[nodiscard]] Cell cell_of(const Vec2& p) const {
    const Vec2 g = to_grid(p);
    return {static_cast<int>(std::floor(g.x())), static_cast<int>(std::floor(g.y()))};
  }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.resolution == b.resolution && a.origin == b.origin &&
           a.width == b.width && a.height == b.height;
  }
};

/// floor((p - origin) / resolution); std::nullopt when outside the grid.
[[nodiscard]] std::optional<Cell> world_to_cell(const GridSpec& spec,
                                                const Vec2& p);
/// Center of a cell. Throws std::out_of_range for cells outside the grid.
[[nodiscard]] Vec2 cell_to_world(const GridSpec& spec, Cell c);

/// Binary map of the working area: 0 free, 1 occupied.
class StaticLayer {
 public:
  explicit StaticLayer(const GridSpec& spec);

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] std::uint8_t value(Cell c) const;
  [[nodiscard]] bool occupied(Cell c) const { return value(c) != 0; }
  void set_occupied(Cell c, bool occupied);
  [[nodiscard]] std::span<const std::uint8_t> cells() const { return cells_; }

  friend bool operator==(const StaticLayer&, const StaticLayer&) = default;

 private:
  GridSpec spec_;
  std::vector<std::uint8_t> cells_;
};

/// Occupancy cost per cell, 0 (certainly free) to 255 (certainly occupied).
class CostLayer {
 public:
  explicit CostLayer(const GridSpec& spec);

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] std::uint8_t at(Cell c) const;
  void set(Cell c, std::uint8_t cost);
  /// Saturating add/subtract; cells outside the grid are ignored.
  void raise(Cell c, int step);
  void lower(Cell c, int step);
  [[nodiscard]] std::span<const std::uint8_t> cells() const { return cells_; }

  friend bool operator==(const CostLayer&, const CostLayer&) = default;

 private:
  GridSpec spec_;
  std::vector<std::uint8_t> cells_;
};

class MultiLayerMap {
 public:
  explicit MultiLayerMap(StaticLayer static_layer);

  [[nodiscard]] const GridSpec& spec() const { return static_.spec(); }
  [[nodiscard]] const StaticLayer& static_layer() const { return static_; }
  [[nodiscard]] const CostLayer& lidar() const { return lidar_; }
  [[nodiscard]] const CostLayer& camera() const { return camera_; }
  CostLayer& lidar() { return lidar_; }
  CostLayer& camera() { return camera_; }

 private:
  StaticLayer static_;
  CostLayer lidar_;
  CostLayer camera_;
};

enum class CellState { Free, Occupied };

/// Cost at or above this value makes a cost-layer cell count as occupied.
inline constexpr int kOccupiedCost = 128;

/// Throws std::out_of_range for cells outside the grid.
[[nodiscard]] CellState fused_state(const MultiLayerMap& map, Cell c);

struct MarkingParams {
  int mark_step = 255;
  int clear_step = 64;
};

/**
 * @brief Ray-traces every beam of a scan into a cost layer.
 *
 * Cells strictly between the sensor and a hit decay by clear_step; the hit
 * cell rises by mark_step. Beams at max_range clear their full length and
 * mark nothing; beams with no data (+inf) are skipped. All beams clear
 * before any beam marks, so adjacent rays cannot erode fresh hits.
 */
void mark_from_scan(CostLayer& layer, const Pose2D& sensor_pose,
                    const PseudoScan& scan, const MarkingParams& params = {});

/// Lowers every cell along each finite beam, endpoint included, by
/// clear_step. Marks nothing.
void clear_from_scan(CostLayer& layer, const Pose2D& sensor_pose,
                     const PseudoScan& scan, const MarkingParams& params = {});

/// Every cell touched by the segment from -> to, in traversal order. At an
/// exact corner crossing both side cells are included. Cells may lie
/// outside the grid.
[[nodiscard]] std::vector<Cell> supercover_cells(const GridSpec& spec,
                                                 const Vec2& from,
                                                 const Vec2& to);

/// Squared distance, in cells, from each cell center to the nearest
/// occupied cell center. +inf everywhere when nothing is occupied.
[[nodiscard]] std::vector<double> squared_distance_transform(
    int width, int height, std::span<const std::uint8_t> occupied);

/// Fused occupancy grown by the expanded radius. Points outside the grid
/// count as occupied.
class InflatedMap {
 public:
  InflatedMap(const GridSpec& spec, std::vector<std::uint8_t> occupied,
              double expanded_radius);

  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] double expanded_radius() const { return radius_; }
  [[nodiscard]] bool occupied(Cell c) const {
    return !spec_.contains(c) || occupied_[spec_.index(c)] != 0;
  }
  [[nodiscard]] bool occupied_at(const Vec2& p) const {
    return occupied(spec_.cell_of(p));
  }
  [[nodiscard]] std::size_t occupied_count() const;

 private:
  GridSpec spec_;
  std::vector<std::uint8_t> occupied_;
  double radius_;
};

/// Cells whose center lies within expanded_radius of an occupied cell center.
[[nodiscard]] InflatedMap inflate(const MultiLayerMap& map,
                                  double expanded_radius);

/// Plain-text static map: header "width height resolution origin_x origin_y",
/// then `height` rows of `width` characters, top row (max y) first,
/// '#' occupied and '.' free. Throws std::runtime_error on malformed input.
[[nodiscard]] StaticLayer read_static_map(std::istream& in);
void write_static_map(std::ostream& out, const StaticLayer& layer);

/// Rectangular free area enclosed by a one-cell wall.
[[nodiscard]] StaticLayer make_walled_map(double width_m, double height_m,
                                          double resolution);

}  // namespace fusionnav

#endif  // FUSIONNAV_COSTMAP_HPP
