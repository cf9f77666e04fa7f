#include "klab/parallel.hpp"

#include <cmath>
#include <limits>

#include "klab/errors.hpp"

namespace klab {

namespace {

double sanitize(double r) { return std::isnan(r) ? std::numeric_limits<double>::infinity() : std::abs(r); }

}  // namespace

void ResidualTracker::update(std::size_t part, double residual, std::span<const double> vector) {
  const double r = sanitize(residual);
  double& slot = result_.parts.at(part);
  if (r > slot) slot = r;
  if (r > best_) {
    best_ = r;
    result_.worst_vector.assign(vector.begin(), vector.end());
  }
}

CheckReport reduce_points(const CheckSpec& spec, const SampleSet& samples, const std::vector<PointResidual>& results) {
  if (results.empty()) throw UsageError("check '" + spec.id + "' needs at least one sample point");
  CheckReport r;
  r.id = spec.id;
  r.anchor = spec.anchor;
  r.tolerance = spec.tolerance;
  r.seed = samples.seed;
  r.points = samples.points.size();
  r.vectors = samples.vectors_per_point();
  r.parts.reserve(spec.parts.size());
  for (const std::string& name : spec.parts) r.parts.push_back({name, 0.0});

  double worst = -1.0;
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const PointResidual& pr = results[i];
    if (pr.parts.size() != spec.parts.size()) throw UsageError("check '" + spec.id + "' produced a malformed result");
    double here = 0.0;
    for (std::size_t k = 0; k < pr.parts.size(); ++k) {
      const double v = sanitize(pr.parts[k]);
      if (v > r.parts[k].value) r.parts[k].value = v;
      if (v > here) here = v;
    }
    if (here > worst) {
      worst = here;
      worst_index = i;
    }
  }
  r.max_residual = std::max(worst, 0.0);
  r.worst_point = samples.points[worst_index].coords;
  r.worst_vector = results[worst_index].worst_vector;
  r.decide();
  return r;
}

}  // namespace klab
