#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "klab/report.hpp"
#include "klab/sampling.hpp"

namespace klab {

/// How per-point kernels are scheduled. `serial` is the reference path kept
/// for testing; `parallel` spreads points over OpenMP threads.
enum class Execution { serial, parallel };

/// fn(i) for every i in [0, count). Each result lands at its own index, so
/// both execution paths return identical vectors. If any call throws, the
/// exception of the lowest failing index is rethrown after the loop.
template <class R, class Fn>
std::vector<R> map_indices(std::size_t count, Fn&& fn, Execution exec) {
  std::vector<R> out(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// Worst residuals found at one sample point.
struct PointResidual {
  std::vector<double> parts;
  Vec worst_vector;
};

/// Running per-part maxima at a point; remembers the input vector at which
/// the overall maximum occurred. NaN counts as +infinity.
class ResidualTracker {
 public:
  explicit ResidualTracker(std::size_t parts) { result_.parts.assign(parts, 0.0); }

  void update(std::size_t part, double residual, std::span<const double> vector = {});
  PointResidual take() { return std::move(result_); }

 private:
  PointResidual result_;
  double best_ = -1.0;
};

struct CheckSpec {
  std::string id;
  std::string anchor;
  double tolerance = 0.0;
  std::vector<std::string> parts;
};

/// Max-reduction of per-point results into a report. Ties resolve to the
/// lowest point index, so the outcome is independent of scheduling.
CheckReport reduce_points(const CheckSpec& spec, const SampleSet& samples, const std::vector<PointResidual>& results);

template <class Fn>
CheckReport run_check(const CheckSpec& spec, const SampleSet& samples, Fn&& per_point, Execution exec) {
  const std::vector<PointResidual> results = map_indices<PointResidual>(
      samples.points.size(), [&](std::size_t i) { return per_point(samples.points[i], samples.vectors[i]); }, exec);
  return reduce_points(spec, samples, results);
}

}  // namespace klab
