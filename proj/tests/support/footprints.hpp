// Occupied-cell footprints of one chair as seen by each sensor. Shared by
// the sim unit tests and the acceptance binary.

#ifndef FUSIONNAV_TESTS_FOOTPRINTS_HPP
#define FUSIONNAV_TESTS_FOOTPRINTS_HPP

#include <set>

#include "fusionnav/costmap.hpp"
#include "fusionnav/sensors.hpp"
#include "fusionnav/world.hpp"

namespace fusionnav::testing {

struct ChairFootprints {
  std::set<Cell> lidar;  ///< cells of noiseless LiDAR returns on the chair
  std::set<Cell> camera;  ///< cells of flattened in-band camera points near the chair
};

/// Renders one noiseless sweep of the LiDAR and both cameras at `robot`
/// in an open 6 x 6 m grid (0.05 m cells) holding only `chair`.
ChairFootprints chair_footprints(const Chair& chair, const Pose2D& robot);

}  // namespace fusionnav::testing

#endif  // FUSIONNAV_TESTS_FOOTPRINTS_HPP
