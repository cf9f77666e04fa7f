#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace klab {

/// Largest chart dimension supported by the jet carrier (4m + 1 with m <= 3).
inline constexpr int kMaxDim = 13;

/// Second-order truncated Taylor data of a scalar at a point: value, gradient
/// and Hessian with respect to the chart coordinates.
///
/// The Hessian is stored packed (upper triangle), so it is symmetric by
/// construction. A jet of dimension 0 is a constant and mixes freely with
/// jets of any dimension; the result takes the larger dimension.
class Jet2 {
 public:
  constexpr Jet2() = default;
  // Implicit so that literals inside field formulas promote to constants.
  constexpr Jet2(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  /// The coordinate function x^index seeded at `value`.
  static Jet2 variable(int dim, int index, double value) {
    Jet2 j(value);
    j.dim_ = dim;
    j.grad_[static_cast<std::size_t>(index)] = 1.0;
    return j;
  }

  static Jet2 constant(int dim, double value) {
    Jet2 j(value);
    j.dim_ = dim;
    return j;
  }

  int dim() const { return dim_; }
  double value() const { return value_; }
  double d(int i) const { return grad_[static_cast<std::size_t>(i)]; }
  double d2(int i, int j) const { return hess_[packed(i, j)]; }

  void set_value(double v) { value_ = v; }
  void set_d(int i, double v) { grad_[static_cast<std::size_t>(i)] = v; }
  void set_d2(int i, int j, double v) { hess_[packed(i, j)] = v; }
  void set_dim(int dim) { dim_ = dim; }

  static constexpr std::size_t packed(int i, int j) {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(j * (j + 1) / 2 + i);
  }

  /// Applies a scalar function given its value and first two derivatives at
  /// value(): f(x), f'(x), f''(x). Every elementary function goes through here.
  Jet2 chain(double f, double df, double d2f) const {
    Jet2 r(f);
    r.dim_ = dim_;
    const int n = dim_;
    for (int i = 0; i < n; ++i) r.grad_[i] = df * grad_[i];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i <= j; ++i) {
        const std::size_t k = packed(i, j);
        r.hess_[k] = df * hess_[k] + d2f * grad_[i] * grad_[j];
      }
    }
    return r;
  }

  Jet2& operator+=(const Jet2& o) {
    dim_ = std::max(dim_, o.dim_);
    value_ += o.value_;
    for (int i = 0; i < o.dim_; ++i) grad_[i] += o.grad_[i];
    const std::size_t nh = hess_size(o.dim_);
    for (std::size_t k = 0; k < nh; ++k) hess_[k] += o.hess_[k];
    return *this;
  }

  Jet2& operator-=(const Jet2& o) {
    dim_ = std::max(dim_, o.dim_);
    value_ -= o.value_;
    for (int i = 0; i < o.dim_; ++i) grad_[i] -= o.grad_[i];
    const std::size_t nh = hess_size(o.dim_);
    for (std::size_t k = 0; k < nh; ++k) hess_[k] -= o.hess_[k];
    return *this;
  }

  Jet2& operator*=(double s) {
    value_ *= s;
    for (int i = 0; i < dim_; ++i) grad_[i] *= s;
    const std::size_t nh = hess_size(dim_);
    for (std::size_t k = 0; k < nh; ++k) hess_[k] *= s;
    return *this;
  }

  Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
  Jet2& operator/=(const Jet2& o) { return *this = *this / o; }
  Jet2& operator/=(double s) { return *this *= 1.0 / s; }

  friend Jet2 operator-(Jet2 a) {
    a *= -1.0;
    return a;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator+(Jet2 a, double b) {
    a.value_ += b;
    return a;
  }
  friend Jet2 operator+(double a, Jet2 b) { return b + a; }
  friend Jet2 operator-(Jet2 a, double b) {
    a.value_ -= b;
    return a;
  }
  friend Jet2 operator-(double a, Jet2 b) { return -b + a; }
  friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
  friend Jet2 operator/(Jet2 a, double s) { return a *= 1.0 / s; }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r(a.value_ * b.value_);
    r.dim_ = std::max(a.dim_, b.dim_);
    const int n = r.dim_;
    for (int i = 0; i < n; ++i) r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i <= j; ++i) {
        const std::size_t k = packed(i, j);
        r.hess_[k] = a.value_ * b.hess_[k] + b.value_ * a.hess_[k] + a.grad_[i] * b.grad_[j] +
                     a.grad_[j] * b.grad_[i];
      }
    }
    return r;
  }

  friend Jet2 reciprocal(const Jet2& x) {
    const double v = x.value_;
    return x.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  }

  friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
  friend Jet2 operator/(double a, const Jet2& b) { return reciprocal(b) * a; }

 private:
  static constexpr std::size_t hess_size(int n) { return static_cast<std::size_t>(n * (n + 1) / 2); }

  int dim_ = 0;
  double value_ = 0.0;
  std::array<double, kMaxDim> grad_{};
  std::array<double, kMaxDim*(kMaxDim + 1) / 2> hess_{};
};

// Elementary functions, overloaded for double and Jet2 so that field formulas
// written as generic lambdas inside namespace klab resolve to one overload set.

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.value(); }

inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double pow(double x, double e) { return std::pow(x, e); }
inline double square(double x) { return x * x; }

inline Jet2 exp(const Jet2& x) {
  const double e = std::exp(x.value());
  return x.chain(e, e, e);
}

inline Jet2 log(const Jet2& x) {
  const double v = x.value();
  return x.chain(std::log(v), 1.0 / v, -1.0 / (v * v));
}

inline Jet2 sqrt(const Jet2& x) {
  const double s = std::sqrt(x.value());
  return x.chain(s, 0.5 / s, -0.25 / (s * x.value()));
}

inline Jet2 sin(const Jet2& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  return x.chain(s, c, -s);
}

inline Jet2 cos(const Jet2& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  return x.chain(c, -s, -c);
}

inline Jet2 pow(const Jet2& x, double e) {
  const double v = x.value();
  return x.chain(std::pow(v, e), e * std::pow(v, e - 1.0), e * (e - 1.0) * std::pow(v, e - 2.0));
}

inline Jet2 square(const Jet2& x) { return x * x; }

}  // namespace klab
