#pragma once

#include <cmath>
#include <vector>

#include "klab/manifolds.hpp"

namespace fixture {

using klab::Vec;

// The orthonormal frame of the example: X0 = xi = -x0 d_0, X_i = x0 d_i.
inline Vec frame_vector(const klab::Point& p, int i) {
  Vec v(5, 0.0);
  v[static_cast<std::size_t>(i)] = i == 0 ? -p.coords[0] : p.coords[0];
  return v;
}

inline klab::TensorField frame_field(const klab::ChartPtr& chart, int i) {
  return klab::TensorField::make(chart, klab::kVector, [i](auto x, auto out) {
    out[static_cast<std::size_t>(i)] = i == 0 ? -x[0] : x[0];
  });
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

inline double max_abs(const Vec& a) {
  double r = 0.0;
  for (double x : a) r = std::max(r, std::abs(x));
  return r;
}

}  // namespace fixture
