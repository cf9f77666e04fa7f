#pragma once

// Finite-difference derivatives of plain scalar functions. Independent of the
// jet code: only function values are used.

#include <cmath>
#include <functional>
#include <vector>

namespace fd {

using Fn = std::function<double(const std::vector<double>&)>;

inline std::vector<double> shifted(std::vector<double> x, int i, double h) {
  x[static_cast<std::size_t>(i)] += h;
  return x;
}

// 5-point central difference at step h.
inline double five_point(const Fn& f, const std::vector<double>& x, int i, double h) {
  return (-f(shifted(x, i, 2 * h)) + 8 * f(shifted(x, i, h)) - 8 * f(shifted(x, i, -h)) + f(shifted(x, i, -2 * h))) /
         (12 * h);
}

// 5-point differences at h and h/2 combined to cancel the h^4 term.
inline double first(const Fn& f, const std::vector<double>& x, int i, double h = 1e-4) {
  return (16 * five_point(f, x, i, h / 2) - five_point(f, x, i, h)) / 15;
}

inline double second_at(const Fn& f, const std::vector<double>& x, int i, int j, double h) {
  if (i == j) return (f(shifted(x, i, h)) - 2 * f(x) + f(shifted(x, i, -h))) / (h * h);
  auto at = [&](double si, double sj) { return f(shifted(shifted(x, i, si * h), j, sj * h)); };
  return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
}

inline double second(const Fn& f, const std::vector<double>& x, int i, int j, double h = 1e-3) {
  return (4 * second_at(f, x, i, j, h / 2) - second_at(f, x, i, j, h)) / 3;
}

inline bool close(double jet, double oracle, double rel = 1e-6) {
  return std::abs(jet - oracle) <= rel * std::max(1.0, std::abs(oracle));
}

}  // namespace fd
