#include "fusionnav/costmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fusionnav {

namespace {

template <typename Visit>
void walk_supercover(const GridSpec& spec, const Vec2& from, const Vec2& to,
                     Visit&& visit) {
  const Vec2 u0 = spec.to_grid(from);
  const Vec2 u1 = spec.to_grid(to);
  Cell cell{static_cast<int>(std::floor(u0.x())),
            static_cast<int>(std::floor(u0.y()))};
  const Cell end{static_cast<int>(std::floor(u1.x())),
                 static_cast<int>(std::floor(u1.y()))};
  visit(cell);

  const double dx = u1.x() - u0.x();
  const double dy = u1.y() - u0.y();
  const int step_x = end.x > cell.x ? 1 : -1;
  const int step_y = end.y > cell.y ? 1 : -1;
  // Crossing parameters come straight from the boundary index so rounding
  // does not accumulate along long beams.
  const auto crossing = [](double u, double d, int c, int step) {
    const double boundary = step > 0 ? c + 1.0 : static_cast<double>(c);
    return d != 0.0 ? (boundary - u) / d : std::numeric_limits<double>::infinity();
  };

  while (cell != end) {
    // An axis that already matches the end cell never steps again.
    const double tx = cell.x != end.x ? crossing(u0.x(), dx, cell.x, step_x)
                                      : std::numeric_limits<double>::infinity();
    const double ty = cell.y != end.y ? crossing(u0.y(), dy, cell.y, step_y)
                                      : std::numeric_limits<double>::infinity();
    if (tx < ty) {
      cell.x += step_x;
    } else if (ty < tx) {
      cell.y += step_y;
    } else {
      // Exact corner crossing: the segment touches both side cells.
      visit(Cell{cell.x + step_x, cell.y});
      visit(Cell{cell.x, cell.y + step_y});
      cell.x += step_x;
      cell.y += step_y;
    }
    visit(cell);
  }
}

void require_cell(const GridSpec& spec, Cell c) {
  if (!spec.contains(c)) {
    throw std::out_of_range("cell (" + std::to_string(c.x) + ", " +
                            std::to_string(c.y) + ") outside grid");
  }
}

// Felzenszwalb & Huttenlocher lower envelope of parabolas, one row/column.
void distance_1d(const double* f, int n, int stride, double* d,
                 std::vector<int>& v, std::vector<double>& z) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  const auto fv = [&](int q) { return f[static_cast<std::ptrdiff_t>(q) * stride]; };
  for (int q = 1; q < n; ++q) {
    const auto intersect = [&](int p) {
      return ((fv(q) + double(q) * q) - (fv(p) + double(p) * p)) /
             (2.0 * (q - p));
    };
    double s = intersect(v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double diff = q - v[k];
    d[static_cast<std::ptrdiff_t>(q) * stride] = diff * diff + fv(v[k]);
  }
}

}  // namespace

void GridSpec::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw std::invalid_argument("grid resolution must be positive");
  }
  if (width < 1 || height < 1) {
    throw std::invalid_argument("grid width and height must be at least 1");
  }
  if (!origin.allFinite()) {
    throw std::invalid_argument("grid origin must be finite");
  }
}

std::optional<Cell> world_to_cell(const GridSpec& spec, const Vec2& p) {
  const Vec2 g = spec.to_grid(p);
  if (!g.allFinite()) return std::nullopt;
  const double fx = std::floor(g.x());
  const double fy = std::floor(g.y());
  if (fx < 0.0 || fy < 0.0 || fx >= spec.width || fy >= spec.height) {
    return std::nullopt;
  }
  return Cell{static_cast<int>(fx), static_cast<int>(fy)};
}

Vec2 cell_to_world(const GridSpec& spec, Cell c) {
  require_cell(spec, c);
  return spec.origin + Vec2(c.x + 0.5, c.y + 0.5) * spec.resolution;
}

StaticLayer::StaticLayer(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  cells_.assign(spec_.cell_count(), 0);
}

std::uint8_t StaticLayer::value(Cell c) const {
  require_cell(spec_, c);
  return cells_[spec_.index(c)];
}

void StaticLayer::set_occupied(Cell c, bool occupied) {
  require_cell(spec_, c);
  cells_[spec_.index(c)] = occupied ? 1 : 0;
}

CostLayer::CostLayer(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  cells_.assign(spec_.cell_count(), 0);
}

std::uint8_t CostLayer::at(Cell c) const {
  require_cell(spec_, c);
  return cells_[spec_.index(c)];
}

void CostLayer::set(Cell c, std::uint8_t cost) {
  require_cell(spec_, c);
  cells_[spec_.index(c)] = cost;
}

void CostLayer::raise(Cell c, int step) {
  if (!spec_.contains(c)) return;
  auto& v = cells_[spec_.index(c)];
  v = static_cast<std::uint8_t>(std::clamp(int(v) + step, 0, 255));
}

void CostLayer::lower(Cell c, int step) {
  if (!spec_.contains(c)) return;
  auto& v = cells_[spec_.index(c)];
  v = static_cast<std::uint8_t>(std::clamp(int(v) - step, 0, 255));
}

MultiLayerMap::MultiLayerMap(StaticLayer static_layer)
    : static_(std::move(static_layer)),
      lidar_(static_.spec()),
      camera_(static_.spec()) {}

CellState fused_state(const MultiLayerMap& map, Cell c) {
  require_cell(map.spec(), c);
  const bool free = map.static_layer().value(c) == 0 &&
                    map.lidar().at(c) < kOccupiedCost &&
                    map.camera().at(c) < kOccupiedCost;
  return free ? CellState::Free : CellState::Occupied;
}

void mark_from_scan(CostLayer& layer, const Pose2D& sensor_pose,
                    const PseudoScan& scan, const MarkingParams& params) {
  const GridSpec& spec = layer.spec();
  const Vec2 origin = sensor_pose.position();
  std::vector<Cell> hits;
  hits.reserve(scan.ranges.size());

  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double range = scan.ranges[i];
    if (!std::isfinite(range)) continue;
    const bool miss = range >= scan.spec.max_range;
    const double length = miss ? scan.spec.max_range : range;
    const double bearing = sensor_pose.theta() + scan.spec.bin_angle(i);
    const Vec2 end = origin + length * Vec2(std::cos(bearing), std::sin(bearing));
    const Cell end_cell = spec.cell_of(end);
    walk_supercover(spec, origin, end, [&](Cell c) {
      if (miss || c != end_cell) layer.lower(c, params.clear_step);
    });
    if (!miss) hits.push_back(end_cell);
  }
  for (const Cell& c : hits) {
    layer.raise(c, params.mark_step);
  }
}

void clear_from_scan(CostLayer& layer, const Pose2D& sensor_pose,
                     const PseudoScan& scan, const MarkingParams& params) {
  const Vec2 origin = sensor_pose.position();
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double range = scan.ranges[i];
    if (!std::isfinite(range)) continue;
    const double length = std::min(range, scan.spec.max_range);
    const double bearing = sensor_pose.theta() + scan.spec.bin_angle(i);
    const Vec2 end = origin + length * Vec2(std::cos(bearing), std::sin(bearing));
    walk_supercover(layer.spec(), origin, end,
                    [&](Cell c) { layer.lower(c, params.clear_step); });
  }
}

std::vector<Cell> supercover_cells(const GridSpec& spec, const Vec2& from,
                                   const Vec2& to) {
  std::vector<Cell> cells;
  walk_supercover(spec, from, to, [&](Cell c) { cells.push_back(c); });
  return cells;
}

std::vector<double> squared_distance_transform(
    int width, int height, std::span<const std::uint8_t> occupied) {
  if (width < 1 || height < 1 ||
      occupied.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("distance transform size mismatch");
  }
  constexpr double kFar = 1e20;
  const std::size_t n = occupied.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = occupied[i] ? 0.0 : kFar;

  const int longest = std::max(width, height);
  std::vector<int> v(longest);
  std::vector<double> z(longest + 1);
  std::vector<double> tmp(n);
  for (int y = 0; y < height; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * width;
    distance_1d(&f[row], width, 1, &tmp[row], v, z);
  }
  for (int x = 0; x < width; ++x) {
    distance_1d(&tmp[x], height, width, &f[x], v, z);
  }
  for (double& d : f) {
    if (d >= kFar * 0.5) d = std::numeric_limits<double>::infinity();
  }
  return f;
}

InflatedMap::InflatedMap(const GridSpec& spec, std::vector<std::uint8_t> occupied,
                         double expanded_radius)
    : spec_(spec), occupied_(std::move(occupied)), radius_(expanded_radius) {
  if (occupied_.size() != spec_.cell_count()) {
    throw std::invalid_argument("inflated map size mismatch");
  }
}

std::size_t InflatedMap::occupied_count() const {
  return static_cast<std::size_t>(
      std::count_if(occupied_.begin(), occupied_.end(),
                    [](std::uint8_t v) { return v != 0; }));
}

InflatedMap inflate(const MultiLayerMap& map, double expanded_radius) {
  if (!(expanded_radius >= 0.0)) {
    throw std::invalid_argument("expanded radius must be non-negative");
  }
  const GridSpec& spec = map.spec();
  const auto st = map.static_layer().cells();
  const auto li = map.lidar().cells();
  const auto ca = map.camera().cells();
  std::vector<std::uint8_t> fused(spec.cell_count());
  for (std::size_t i = 0; i < fused.size(); ++i) {
    fused[i] = (st[i] != 0 || li[i] >= kOccupiedCost || ca[i] >= kOccupiedCost);
  }
  if (expanded_radius == 0.0) {
    return {spec, std::move(fused), expanded_radius};
  }
  const auto dist2 = squared_distance_transform(spec.width, spec.height, fused);
  const double r_cells = expanded_radius / spec.resolution;
  const double limit = r_cells * r_cells + 1e-9;
  std::vector<std::uint8_t> grown(spec.cell_count());
  for (std::size_t i = 0; i < grown.size(); ++i) {
    grown[i] = dist2[i] <= limit;
  }
  return {spec, std::move(grown), expanded_radius};
}

StaticLayer make_walled_map(double width_m, double height_m, double resolution) {
  GridSpec spec;
  spec.resolution = resolution;
  spec.width = static_cast<int>(std::lround(width_m / resolution));
  spec.height = static_cast<int>(std::lround(height_m / resolution));
  StaticLayer layer(spec);
  for (int x = 0; x < spec.width; ++x) {
    layer.set_occupied({x, 0}, true);
    layer.set_occupied({x, spec.height - 1}, true);
  }
  for (int y = 0; y < spec.height; ++y) {
    layer.set_occupied({0, y}, true);
    layer.set_occupied({spec.width - 1, y}, true);
  }
  return layer;
}

}  // namespace fusionnav
