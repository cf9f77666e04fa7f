#include "klab/sampling.hpp"

#include <cmath>
#include <numbers>

#include "klab/errors.hpp"

namespace klab {

double Lcg64::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec random_unit_direction(Lcg64& rng, int dim) {
  Vec v(static_cast<std::size_t>(dim));
  for (;;) {
    double n2 = 0.0;
    for (double& c : v) {
      c = rng.normal();
      n2 += c * c;
    }
    if (n2 > 1e-12) {
      const double inv = 1.0 / std::sqrt(n2);
      for (double& c : v) c *= inv;
      return v;
    }
  }
}

SampleSet sample(const Chart& chart, int n_points, int n_vectors, std::uint64_t seed) {
  if (n_points < 1) throw UsageError("n_points must be at least 1");
  if (n_vectors < 0) throw UsageError("n_vectors must be non-negative");
  constexpr int kMaxTries = 100000;
  SampleSet s;
  s.seed = seed;
  Lcg64 rng(seed);
  const int dim = chart.dim();
  for (int i = 0; i < n_points; ++i) {
    Vec x(static_cast<std::size_t>(dim));
    int tries = 0;
    do {
      if (++tries > kMaxTries) throw UsageError("chart '" + chart.name() + "' rejects its whole sampling box");
      for (int a = 0; a < dim; ++a) {
        x[static_cast<std::size_t>(a)] =
            rng.uniform(chart.box_lower()[static_cast<std::size_t>(a)], chart.box_upper()[static_cast<std::size_t>(a)]);
      }
    } while (!chart.admissible(x));
    s.points.emplace_back(std::move(x));
    std::vector<Vec> dirs;
    dirs.reserve(static_cast<std::size_t>(n_vectors));
    for (int k = 0; k < n_vectors; ++k) dirs.push_back(random_unit_direction(rng, dim));
    s.vectors.push_back(std::move(dirs));
  }
  return s;
}

}  // namespace klab
