#ifndef FUSIONNAV_RANDOM_HPP
#define FUSIONNAV_RANDOM_HPP

#include <cstdint>
#include <random>

namespace fusionnav {

/// Named random streams so each consumer draws from its own sequence.
enum class Stream : std::uint64_t {
  Calibration = 1,
  Lidar = 2,
  Camera1 = 3,
  Camera2 = 4,
  Localization = 5,
};

/**
 * Seeded generator keyed by (seed, stream, tick). Two instances built from
 * the same key produce identical sequences, which is what makes scenario
 * runs reproducible tick by tick.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed, Stream stream = Stream::Calibration,
               std::uint64_t tick = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(tick),
                      static_cast<std::uint32_t>(tick >> 32)};
    engine_.seed(seq);
  }

  double normal(double sigma) {
    if (sigma <= 0.0) return 0.0;
    return sigma * standard_normal_(engine_);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> standard_normal_{0.0, 1.0};
};

}  // namespace fusionnav

#endif  // FUSIONNAV_RANDOM_HPP
