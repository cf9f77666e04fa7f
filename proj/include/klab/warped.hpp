#pragma once

#include <array>

#include "klab/tensor_field.hpp"

namespace klab {

/// A metric with three endomorphism fields meant to form a quaternionic
/// triple J1, J2, J3 = J1 J2 on an even-dimensional chart.
struct QuaternionicBase {
  MetricField metric;
  std::array<TensorField, 3> j;
};

/// Input to the warped-product builder: the interval (t_min, t_max) times a
/// quaternionic base, with metric dt^2 + (c e^t)^2 g_base.
struct WarpedProductSpec {
  QuaternionicBase base;
  double c = 1.0;
  double t_min = -3.0;
  double t_max = 3.0;
  /// Only the flat quaternionic model is certified; anything else is built
  /// but flagged "unverified base".
  bool flat_base = true;

  int base_dim() const { return base.metric.dim(); }
};

}  // namespace klab
