#include "fusionnav/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

namespace fusionnav {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void open_and_write(const std::filesystem::path& path,
                    void (*writer)(std::ostream&, const ScenarioResult&),
                    const ScenarioResult& result) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error(path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  writer(out, result);
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

// Maps world meters onto SVG pixels with y pointing up.
struct Canvas {
  GridSpec spec;
  double scale = 40.0;
  double margin = 10.0;

  [[nodiscard]] double width() const { return spec.width * spec.resolution * scale + 2 * margin; }
  [[nodiscard]] double height() const { return spec.height * spec.resolution * scale + 2 * margin; }
  [[nodiscard]] double px(double x) const { return margin + (x - spec.origin.x()) * scale; }
  [[nodiscard]] double py(double y) const {
    return margin + (spec.origin.y() + spec.height * spec.resolution - y) * scale;
  }
};

// Horizontal runs of marked cells, one rect per run.
template <typename Pred>
void cell_runs(std::ostream& out, const Canvas& cv, const std::string& style, Pred marked) {
  const GridSpec& s = cv.spec;
  const double cell = s.resolution * cv.scale;
  out << "<g " << style << ">\n";
  for (int y = 0; y < s.height; ++y) {
    int x = 0;
    while (x < s.width) {
      if (!marked(Cell{x, y})) {
        ++x;
        continue;
      }
      const int begin = x;
      while (x < s.width && marked(Cell{x, y})) ++x;
      const double wx = s.origin.x() + begin * s.resolution;
      const double wy = s.origin.y() + (y + 1) * s.resolution;
      out << "<rect x=\"" << fixed(cv.px(wx), 2) << "\" y=\"" << fixed(cv.py(wy), 2)
          << "\" width=\"" << fixed((x - begin) * cell, 2) << "\" height=\""
          << fixed(cell, 2) << "\"/>\n";
    }
  }
  out << "</g>\n";
}

template <typename PoseOf>
void polyline(std::ostream& out, const Canvas& cv, const ScenarioResult& r,
              const std::string& style, PoseOf pose_of) {
  out << "<polyline " << style << " points=\"";
  for (std::size_t i = 0; i < r.ticks.size(); ++i) {
    const Pose2D p = pose_of(r.ticks[i]);
    if (i > 0) out << ' ';
    out << fixed(cv.px(p.x()), 2) << ',' << fixed(cv.py(p.y()), 2);
  }
  out << "\"/>\n";
}

void obstacle_shape(std::ostream& out, const Canvas& cv, const Obstacle& o) {
  const auto rect = [&](const Vec2& center, const Vec2& size, const char* style) {
    out << "<rect " << style << " x=\"" << fixed(cv.px(center.x() - 0.5 * size.x()), 2)
        << "\" y=\"" << fixed(cv.py(center.y() + 0.5 * size.y()), 2) << "\" width=\""
        << fixed(size.x() * cv.scale, 2) << "\" height=\"" << fixed(size.y() * cv.scale, 2)
        << "\"/>\n";
  };
  const auto circle = [&](const Vec2& c, double r, const char* style) {
    out << "<circle " << style << " cx=\"" << fixed(cv.px(c.x()), 2) << "\" cy=\""
        << fixed(cv.py(c.y()), 2) << "\" r=\"" << fixed(r * cv.scale, 2) << "\"/>\n";
  };
  std::visit(
      [&](const auto& ob) {
        using T = std::decay_t<decltype(ob)>;
        if constexpr (std::is_same_v<T, Box>) {
          rect(ob.center, ob.size, "fill=\"none\" stroke=\"#7a4a00\" stroke-width=\"1.5\"");
        } else if constexpr (std::is_same_v<T, Chair>) {
          rect(ob.center, ob.seat_size,
               "fill=\"none\" stroke=\"#7a4a00\" stroke-width=\"1.5\" stroke-dasharray=\"4 2\"");
          for (const auto& leg : ob.leg_centers()) {
            circle(leg, ob.leg_radius, "fill=\"#7a4a00\"");
          }
        } else {
          circle(ob.position, ob.radius, "fill=\"none\" stroke=\"#7a4a00\" stroke-width=\"1.5\"");
        }
      },
      o);
}

}  // namespace

OutputPaths OutputPaths::in(const std::filesystem::path& dir) {
  return {dir / "trajectory.csv", dir / "metrics.txt", dir / "plot.svg"};
}

void write_trajectory(std::ostream& out, const ScenarioResult& result) {
  out << "t,x_gt,y_gt,theta_gt,x_est,y_est,theta_est,v,w,clearance\n";
  for (const TickRecord& k : result.ticks) {
    out << fixed(k.t, 3) << ',' << fixed(k.ground_truth.x()) << ','
        << fixed(k.ground_truth.y()) << ',' << fixed(k.ground_truth.theta()) << ','
        << fixed(k.estimate.x()) << ',' << fixed(k.estimate.y()) << ','
        << fixed(k.estimate.theta()) << ',' << fixed(k.command.v) << ','
        << fixed(k.command.w) << ',' << fixed(k.clearance) << '\n';
  }
}

void write_metrics(std::ostream& out, const ScenarioResult& r) {
  const RunMetrics& m = r.metrics;
  out << "scenario=" << r.scenario << '\n'
      << "mode=" << to_string(r.mode) << '\n'
      << "seed=" << r.seed << '\n'
      << "termination=" << to_string(r.termination) << '\n'
      << "goal_reached=" << (r.goal_reached() ? "true" : "false") << '\n'
      << "collided=" << (r.collided() ? "true" : "false") << '\n'
      << "timed_out=" << (r.timed_out() ? "true" : "false") << '\n'
      << "ticks=" << m.ticks << '\n'
      << "path_length=" << fixed(m.path_length) << '\n'
      << "duration=" << fixed(m.duration, 3) << '\n'
      << "mean_position_error=" << fixed(m.mean_position_error) << '\n'
      << "max_position_error=" << fixed(m.max_position_error) << '\n'
      << "mean_abs_error_x=" << fixed(m.mean_abs_error_x) << '\n'
      << "mean_abs_error_y=" << fixed(m.mean_abs_error_y) << '\n'
      << "min_clearance=" << fixed(m.min_clearance) << '\n'
      << "min_seat_clearance=" << fixed(m.min_seat_clearance) << '\n'
      << "final_goal_distance=" << fixed(m.final_goal_distance) << '\n'
      << "calibration_rotation_residual=" << fixed(r.calibration.rotation_residual, 9) << '\n'
      << "calibration_translation_residual=" << fixed(r.calibration.translation_residual, 9)
      << '\n';
}

void write_plot_svg(std::ostream& out, const ScenarioResult& r) {
  Canvas cv;
  cv.spec = r.map.spec();
  const double extent = std::max(cv.spec.width, cv.spec.height) * cv.spec.resolution;
  cv.scale = std::min(40.0, 1600.0 / std::max(extent, 1e-9));

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(cv.width(), 0)
      << "\" height=\"" << fixed(cv.height(), 0) << "\" viewBox=\"0 0 "
      << fixed(cv.width(), 0) << ' ' << fixed(cv.height(), 0) << "\">\n"
      << "<title>" << r.scenario << " (" << to_string(r.mode) << ", seed " << r.seed
      << ")</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const auto& layers = r.map;
  cell_runs(out, cv, "id=\"camera\" fill=\"#3b6fd8\" fill-opacity=\"0.45\"",
            [&](Cell c) { return layers.camera().at(c) >= kOccupiedCost; });
  cell_runs(out, cv, "id=\"lidar\" fill=\"#d83b3b\" fill-opacity=\"0.55\"",
            [&](Cell c) { return layers.lidar().at(c) >= kOccupiedCost; });
  cell_runs(out, cv, "id=\"static\" fill=\"#222222\"",
            [&](Cell c) { return layers.static_layer().occupied(c); });

  out << "<g id=\"obstacles\">\n";
  for (const auto& o : r.obstacles) obstacle_shape(out, cv, o);
  out << "</g>\n";

  polyline(out, cv, r, "id=\"estimate\" fill=\"none\" stroke=\"#f28c28\" stroke-width=\"1\"",
           [](const TickRecord& k) { return k.estimate; });
  polyline(out, cv, r, "id=\"ground_truth\" fill=\"none\" stroke=\"#1a9a3a\" stroke-width=\"2\"",
           [](const TickRecord& k) { return k.ground_truth; });

  out << "<circle id=\"start\" cx=\"" << fixed(cv.px(r.start.x()), 2) << "\" cy=\""
      << fixed(cv.py(r.start.y()), 2) << "\" r=\"4\" fill=\"#1a9a3a\"/>\n"
      << "<circle id=\"goal\" cx=\"" << fixed(cv.px(r.goal.x()), 2) << "\" cy=\""
      << fixed(cv.py(r.goal.y()), 2) << "\" r=\"4\" fill=\"#b01fb0\"/>\n"
      << "</svg>\n";
}

void emit_outputs(const ScenarioResult& result, const OutputPaths& paths) {
  open_and_write(paths.trajectory, write_trajectory, result);
  open_and_write(paths.metrics, write_metrics, result);
  open_and_write(paths.plot, write_plot_svg, result);
}

void write_comparison(std::ostream& out, const ModeComparison& c) {
  out << "metric,lidar,fusion,delta\n";
  for (const MetricDelta& d : c.deltas) {
    out << d.name << ',' << fixed(d.lidar) << ',' << fixed(d.fusion) << ','
        << fixed(d.delta()) << '\n';
  }
  out << "termination," << to_string(c.lidar.termination) << ','
      << to_string(c.fusion.termination) << ",\n"
      << "verdict: " << c.verdict << '\n';
}

}  // namespace fusionnav
