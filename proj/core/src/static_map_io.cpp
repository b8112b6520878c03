#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fusionnav/costmap.hpp"

namespace fusionnav {

namespace {

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  return {buf.data(), end};
}

}  // namespace

StaticLayer read_static_map(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("static map: missing header line");
  }
  std::istringstream fields(header);
  GridSpec spec;
  double ox = 0.0;
  double oy = 0.0;
  if (!(fields >> spec.width >> spec.height >> spec.resolution >> ox >> oy)) {
    throw std::runtime_error(
        "static map: header must be 'width height resolution origin_x origin_y'");
  }
  std::string extra;
  if (fields >> extra) {
    throw std::runtime_error("static map: trailing header field '" + extra + "'");
  }
  spec.origin = Vec2(ox, oy);
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("static map: ") + e.what());
  }

  StaticLayer layer(spec);
  std::string row;
  for (int r = 0; r < spec.height; ++r) {
    if (!std::getline(in, row)) {
      throw std::runtime_error("static map: expected " +
                               std::to_string(spec.height) + " rows, got " +
                               std::to_string(r));
    }
    if (row.size() != static_cast<std::size_t>(spec.width)) {
      throw std::runtime_error("static map: row " + std::to_string(r + 1) +
                               " has " + std::to_string(row.size()) +
                               " characters, expected " +
                               std::to_string(spec.width));
    }
    const int y = spec.height - 1 - r;
    for (int x = 0; x < spec.width; ++x) {
      const char ch = row[static_cast<std::size_t>(x)];
      if (ch == '#') {
        layer.set_occupied({x, y}, true);
      } else if (ch != '.') {
        throw std::runtime_error("static map: invalid character '" +
                                 std::string(1, ch) + "' in row " +
                                 std::to_string(r + 1));
      }
    }
  }
  return layer;
}

void write_static_map(std::ostream& out, const StaticLayer& layer) {
  const GridSpec& spec = layer.spec();
  out << spec.width << ' ' << spec.height << ' ' << format_double(spec.resolution)
      << ' ' << format_double(spec.origin.x()) << ' '
      << format_double(spec.origin.y()) << '\n';
  std::string row(static_cast<std::size_t>(spec.width), '.');
  for (int y = spec.height - 1; y >= 0; --y) {
    for (int x = 0; x < spec.width; ++x) {
      row[static_cast<std::size_t>(x)] = layer.occupied({x, y}) ? '#' : '.';
    }
    out << row << '\n';
  }
}

}  // namespace fusionnav
