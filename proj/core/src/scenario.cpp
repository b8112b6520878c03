#include "fusionnav/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace fusionnav {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid scenario:";
  for (const auto& item : items) out += "\n  - " + item;
  return out;
}

// Walks a YAML mapping, collecting problems instead of stopping at the first.
class Section {
 public:
  Section(YAML::Node node, std::string path, std::vector<std::string>& errors)
      : node_(std::move(node)), path_(std::move(path)), errors_(errors) {
    if (present() && !node_.IsMap()) {
      errors_.push_back(path_ + ": expected a mapping");
      node_ = YAML::Node();
    }
  }

  [[nodiscard]] bool present() const { return node_.IsDefined() && !node_.IsNull(); }
  [[nodiscard]] bool has(const std::string& key) const {
    return present() && node_[key].IsDefined();
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return {present() ? node_[key] : YAML::Node(), key_path(key), errors_};
  }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return present() ? node_[key] : YAML::Node();
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!has(key)) return;
    try {
      out = node_[key].as<T>();
    } catch (const YAML::Exception&) {
      errors_.push_back(key_path(key) + ": wrong value type");
    }
  }

  void read_deg(const std::string& key, double& out_rad) {
    double deg = 0.0;
    if (!has(key)) {
      seen_.insert(key);
      return;
    }
    read(key, deg);
    out_rad = deg_to_rad(deg);
  }

  void read_vec2(const std::string& key, Vec2& out) {
    std::vector<double> v;
    read(key, v);
    if (!has(key)) return;
    if (v.size() != 2) {
      errors_.push_back(key_path(key) + ": expected [x, y]");
      return;
    }
    out = Vec2(v[0], v[1]);
  }

  void require(const std::string& key) {
    if (!has(key)) errors_.push_back(key_path(key) + ": required");
  }

  /// Reports keys that were never consumed; catches typos in configs.
  void finish() {
    if (!present()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) errors_.push_back(key_path(key) + ": unknown key");
    }
  }

  [[nodiscard]] std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

Obstacle parse_obstacle(Section& s, std::vector<std::string>& errors,
                        const std::string& where) {
  std::string type;
  s.read("type", type);
  if (type == "box") {
    Box b;
    s.require("center");
    s.read_vec2("center", b.center);
    s.read_vec2("size", b.size);
    s.read("height", b.height);
    s.finish();
    return b;
  }
  if (type == "chair") {
    Chair c;
    s.require("center");
    s.read_vec2("center", c.center);
    s.read_vec2("seat_size", c.seat_size);
    Vec2 seat(c.seat_lo, c.seat_hi);
    s.read_vec2("seat_height", seat);
    c.seat_lo = seat.x();
    c.seat_hi = seat.y();
    s.read("leg_radius", c.leg_radius);
    s.read("leg_height", c.leg_height);
    s.read("leg_inset", c.leg_inset);
    s.finish();
    return c;
  }
  if (type == "person") {
    Person p;
    s.require("waypoints");
    std::vector<std::vector<double>> pts;
    s.read("waypoints", pts);
    for (const auto& pt : pts) {
      if (pt.size() != 2) {
        errors.push_back(where + ".waypoints: expected [x, y] entries");
        continue;
      }
      p.waypoints.emplace_back(pt[0], pt[1]);
    }
    s.read("speed", p.speed);
    s.read("radius", p.radius);
    s.read("height", p.height);
    s.read("loop", p.loop);
    s.finish();
    if (!p.waypoints.empty()) p.reset();
    return p;
  }
  errors.push_back(where + ".type: expected box, chair or person");
  return Box{};
}

void parse_camera(Section& s, Scenario& sc) {
  CameraModel base;
  s.read_deg("hfov_deg", base.hfov);
  s.read_deg("vfov_deg", base.vfov);
  s.read("cols", base.cols);
  s.read("rows", base.rows);
  s.read_deg("tilt_deg", base.tilt);
  s.read("max_range", base.max_range);
  s.read("sigma", base.range_sigma);
  double forward = base.mount_position.x();
  double lateral = base.mount_position.y();
  double height = base.mount_position.z();
  double yaw = base.mount_yaw;
  s.read("mount_x", forward);
  s.read("lateral_offset", lateral);
  s.read("height", height);
  s.read_deg("yaw_deg", yaw);
  s.finish();
  sc.camera_left = base;
  sc.camera_left.mount_position = Vec3(forward, lateral, height);
  sc.camera_left.mount_yaw = yaw;
  sc.camera_right = base;
  sc.camera_right.mount_position = Vec3(forward, -lateral, height);
  sc.camera_right.mount_yaw = -yaw;
}

}  // namespace

std::string_view to_string(FusionMode mode) {
  return mode == FusionMode::Fusion ? "fusion" : "lidar";
}

FusionMode parse_fusion_mode(std::string_view token) {
  if (token == "fusion") return FusionMode::Fusion;
  if (token == "lidar") return FusionMode::LidarOnly;
  throw std::invalid_argument("mode must be 'lidar' or 'fusion', got '" +
                              std::string(token) + "'");
}

ScenarioError::ScenarioError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

StaticLayer load_static_map(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open static map " + file.string());
  try {
    return read_static_map(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(file.string() + ": " + e.what());
  }
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> v;
  const auto check = [&](const std::string& what, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      v.push_back(what + ": " + e.what());
    }
  };
  check("robot.limits", [&] { s.limits.validate(); });
  check("planner", [&] { s.planner.validate(); });
  check("sensors.lidar", [&] { s.lidar.validate(); });
  check("sensors.cameras", [&] { s.camera_left.validate(); });

  const World world(s.static_map, {});
  const GridSpec& spec = s.static_map.spec();
  const auto free_point = [&](const Vec2& p, const std::string& what) {
    const auto cell = world_to_cell(spec, p);
    if (!cell) {
      v.push_back(what + " lies outside the static map");
    } else if (s.static_map.occupied(*cell)) {
      v.push_back(what + " lies in an occupied static cell");
    }
  };
  free_point(s.start.position(), "robot.start");
  free_point(s.goal, "robot.goal");

  if (!(s.robot_radius > 0.0)) v.push_back("robot.radius must be positive");
  if (!(s.goal_tolerance > 0.0)) v.push_back("robot.goal_tolerance must be positive");
  if (!(s.max_duration > 0.0)) v.push_back("run.max_duration must be positive");
  if (!(s.localization.position_sigma >= 0.0 &&
        s.localization.heading_sigma >= 0.0)) {
    v.push_back("sensors.localization sigmas must be non-negative");
  }
  if (s.calibration.samples < 1) v.push_back("calibration.samples must be at least 1");
  if (!(s.calibration.noise.rotation_sigma >= 0.0 &&
        s.calibration.noise.translation_sigma >= 0.0)) {
    v.push_back("calibration sigmas must be non-negative");
  }
  if (!(s.fusion.z_band.lo < s.fusion.z_band.hi)) {
    v.push_back("fusion.z_band must satisfy lo < hi");
  }
  if (!(s.fusion.camera_bin > 0.0)) v.push_back("fusion.camera_bin_deg must be positive");
  const auto step_ok = [](int step) { return step >= 0 && step <= 255; };
  if (!step_ok(s.fusion.marking.mark_step) || !step_ok(s.fusion.marking.clear_step)) {
    v.push_back("fusion mark_step and clear_step must be within [0, 255]");
  }

  for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
    const std::string where = "world.obstacles[" + std::to_string(i) + "]";
    std::visit(
        [&](const auto& o) {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, Box>) {
            if (!(o.height > 0.0)) v.push_back(where + ": height must be positive");
            if (!(o.size.minCoeff() > 0.0)) v.push_back(where + ": size must be positive");
            if (!world.in_bounds(o.center)) v.push_back(where + ": outside world bounds");
          } else if constexpr (std::is_same_v<T, Chair>) {
            if (!(o.seat_lo > 0.0 && o.seat_hi > o.seat_lo)) {
              v.push_back(where + ": seat_height must satisfy 0 < lo < hi");
            }
            if (!(o.leg_height > 0.0 && o.leg_radius > 0.0)) {
              v.push_back(where + ": legs need positive height and radius");
            }
            if (!(o.seat_size.minCoeff() > 0.0)) {
              v.push_back(where + ": seat_size must be positive");
            }
            if (!world.in_bounds(o.center)) v.push_back(where + ": outside world bounds");
          } else {
            if (!(o.height > 0.0 && o.radius > 0.0)) {
              v.push_back(where + ": height and radius must be positive");
            }
            if (!(o.speed >= 0.0)) v.push_back(where + ": speed must be non-negative");
            if (o.waypoints.empty()) v.push_back(where + ": needs waypoints");
            for (const auto& w : o.waypoints) {
              if (!world.in_bounds(w)) {
                v.push_back(where + ": waypoint outside world bounds");
                break;
              }
            }
          }
        },
        s.obstacles[i]);
  }
  return v;
}

Scenario parse_scenario(const std::string& yaml_text,
                        const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ScenarioError({std::string("YAML syntax: ") + e.what()});
  }
  std::vector<std::string> errors;
  Scenario sc;
  bool map_loaded = false;
  Section top(root, "", errors);
  top.read("name", sc.name);

  {
    Section world = top.child("world");
    world.require("map");
    std::string map;
    world.read("map", map);
    if (!map.empty()) {
      sc.map_path = base_dir / map;
      try {
        sc.static_map = load_static_map(sc.map_path);
        map_loaded = true;
      } catch (const std::runtime_error& e) {
        errors.push_back(std::string("world.map: ") + e.what());
      }
    }
    const YAML::Node list = world.raw("obstacles");
    if (list && !list.IsSequence()) {
      errors.push_back("world.obstacles: expected a list");
    } else if (list) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "world.obstacles[" + std::to_string(i) + "]";
        Section o(list[i], where, errors);
        sc.obstacles.push_back(parse_obstacle(o, errors, where));
      }
    }
    world.finish();
  }
  {
    Section robot = top.child("robot");
    robot.require("start");
    robot.require("goal");
    std::vector<double> start;
    robot.read("start", start);
    if (robot.has("start")) {
      if (start.size() == 2 || start.size() == 3) {
        sc.start = Pose2D(start[0], start[1],
                          start.size() == 3 ? deg_to_rad(start[2]) : 0.0);
      } else {
        errors.push_back("robot.start: expected [x, y] or [x, y, heading_deg]");
      }
    }
    robot.read_vec2("goal", sc.goal);
    robot.read("radius", sc.robot_radius);
    robot.read("goal_tolerance", sc.goal_tolerance);
    Section lim = robot.child("limits");
    lim.read("v_min", sc.limits.v_min);
    lim.read("v_max", sc.limits.v_max);
    lim.read("w_min", sc.limits.w_min);
    lim.read("w_max", sc.limits.w_max);
    lim.read("acc_v", sc.limits.acc_v);
    lim.read("dec_v", sc.limits.dec_v);
    lim.read("acc_w", sc.limits.acc_w);
    lim.read("dec_w", sc.limits.dec_w);
    lim.finish();
    robot.finish();
  }
  {
    Section sensors = top.child("sensors");
    Section lidar = sensors.child("lidar");
    lidar.read_deg("fov_deg", sc.lidar.fov);
    lidar.read_deg("resolution_deg", sc.lidar.angular_resolution);
    lidar.read("max_range", sc.lidar.max_range);
    lidar.read("height", sc.lidar.mount_height);
    lidar.read("sigma", sc.lidar.range_sigma);
    double mount_x = sc.lidar.mount.x();
    lidar.read("mount_x", mount_x);
    sc.lidar.mount = Pose2D(mount_x, 0.0, 0.0);
    lidar.finish();

    Section cameras = sensors.child("cameras");
    parse_camera(cameras, sc);

    Section loc = sensors.child("localization");
    loc.read("position_sigma", sc.localization.position_sigma);
    loc.read("heading_sigma", sc.localization.heading_sigma);
    loc.finish();
    sensors.finish();
  }
  {
    Section cal = top.child("calibration");
    cal.read("samples", sc.calibration.samples);
    cal.read_deg("rotation_sigma_deg", sc.calibration.noise.rotation_sigma);
    cal.read("translation_sigma", sc.calibration.noise.translation_sigma);
    std::string log;
    cal.read("marker_log", log);
    if (!log.empty()) sc.calibration.marker_log = base_dir / log;
    cal.finish();
  }
  {
    Section p = top.child("planner");
    p.read("alpha", sc.planner.alpha);
    p.read("beta", sc.planner.beta);
    p.read("gamma", sc.planner.gamma);
    p.read("horizon", sc.planner.horizon);
    p.read("v_samples", sc.planner.v_samples);
    p.read("w_samples", sc.planner.w_samples);
    p.read("expanded_radius", sc.planner.expanded_radius);
    p.finish();
  }
  {
    Section f = top.child("fusion");
    Vec2 band(sc.fusion.z_band.lo, sc.fusion.z_band.hi);
    f.read_vec2("z_band", band);
    sc.fusion.z_band = {band.x(), band.y()};
    f.read_deg("camera_bin_deg", sc.fusion.camera_bin);
    f.read("mark_step", sc.fusion.marking.mark_step);
    f.read("clear_step", sc.fusion.marking.clear_step);
    f.finish();
  }
  {
    Section run = top.child("run");
    std::string mode;
    run.read("mode", mode);
    if (!mode.empty()) {
      try {
        sc.mode = parse_fusion_mode(mode);
      } catch (const std::invalid_argument& e) {
        errors.push_back(std::string("run.mode: ") + e.what());
      }
    }
    run.read("seed", sc.seed);
    run.read("max_duration", sc.max_duration);
    run.read("dt", sc.planner.dt);
    run.finish();
  }
  top.finish();

  // Semantic checks need the map; without it only syntax errors are listed.
  if (map_loaded) {
    auto violations = validate_scenario(sc);
    errors.insert(errors.end(), violations.begin(), violations.end());
  }
  if (!errors.empty()) throw ScenarioError(std::move(errors));
  return sc;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError({"cannot open scenario file " + file.string()});
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario sc = parse_scenario(buf.str(), file.parent_path());
  if (sc.name.empty()) sc.name = file.stem().string();
  return sc;
}

}  // namespace fusionnav
