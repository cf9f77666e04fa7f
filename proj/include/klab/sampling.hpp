#pragma once

#include <cstdint>
#include <vector>

#include "klab/chart.hpp"

namespace klab {

/// 64-bit linear congruential generator, state' = a * state + c (mod 2^64)
/// with Knuth's MMIX constants a = 6364136223846793005 and
/// c = 1442695040888963407. The state is initialised to the seed and each
/// draw advances once and returns the new state. Reals use the top 53 bits,
/// so every implementation of this scheme samples identical points.
class Lcg64 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    state_ = state_ * kMultiplier + kIncrement;
    return state_;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller (cosine branch only).
  double normal();

 private:
  std::uint64_t state_;
};

/// Sample points and, per point, random directions uniform on the unit
/// sphere of coordinates.
struct SampleSet {
  std::uint64_t seed = 0;
  std::vector<Point> points;
  std::vector<std::vector<Vec>> vectors;

  std::size_t vectors_per_point() const { return vectors.empty() ? 0 : vectors.front().size(); }
};

/// Points uniform in the chart's sampling box, rejecting inadmissible ones.
/// Draw order: coordinates of point 0, its directions, then point 1, ...
SampleSet sample(const Chart& chart, int n_points, int n_vectors, std::uint64_t seed);

Vec random_unit_direction(Lcg64& rng, int dim);

}  // namespace klab
