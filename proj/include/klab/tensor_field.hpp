#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <type_traits>
#include <vector>

#include "klab/chart.hpp"
#include "klab/jet.hpp"

namespace klab {

/// Counts of upper (contravariant) and lower (covariant) indices.
struct Variance {
  int upper = 0;
  int lower = 0;

  int rank() const { return upper + lower; }
  friend bool operator==(const Variance&, const Variance&) = default;
};

inline constexpr Variance kScalar{0, 0};
inline constexpr Variance kVector{1, 0};
inline constexpr Variance kCovector{0, 1};
inline constexpr Variance kEndomorphism{1, 1};
inline constexpr Variance kBilinear{0, 2};

std::size_t ipow(int base, int exp);

/// A smooth field of component arrays on a chart.
///
/// Components are stored row-major with the upper indices first, so a (1,1)
/// field phi stores phi^a_b at a * dim + b. The formula is supplied once as a
/// generic callable `fn(std::span<const T> x, std::span<T> out)` and is
/// instantiated for T = double (plain evaluation) and T = Jet2 (value, first
/// and second derivatives). `out` is zero-filled before the call.
class TensorField {
 public:
  template <class T>
  using Kernel = std::function<void(std::span<const T>, std::span<T>)>;

  TensorField() = default;

  template <class Fn>
  static TensorField make(ChartPtr chart, Variance variance, Fn fn) {
    TensorField f;
    f.chart_ = std::move(chart);
    f.variance_ = variance;
    f.size_ = ipow(f.chart_->dim(), variance.rank());
    f.plain_ = [fn](std::span<const double> x, std::span<double> out) { fn(x, out); };
    f.jet_ = [fn](std::span<const Jet2> x, std::span<Jet2> out) { fn(x, out); };
    return f;
  }

  const Chart& chart() const { return *chart_; }
  const ChartPtr& chart_ptr() const { return chart_; }
  int dim() const { return chart_->dim(); }
  Variance variance() const { return variance_; }
  std::size_t size() const { return size_; }
  bool valid() const { return static_cast<bool>(chart_); }

  /// Raw evaluation on already-seeded coordinates; no domain check. Used to
  /// compose fields inside other field formulas.
  template <class T>
  void evaluate(std::span<const T> x, std::span<T> out) const {
    std::fill(out.begin(), out.end(), T(0.0));
    if constexpr (std::is_same_v<T, double>) {
      plain_(x, out);
    } else {
      jet_(x, out);
    }
  }

  template <class T>
  std::vector<T> evaluate(std::span<const T> x) const {
    std::vector<T> out(size_);
    evaluate<T>(x, out);
    return out;
  }

  Vec eval(const Point& p) const;
  std::vector<Jet2> jet_eval(const Point& p) const;

 private:
  ChartPtr chart_;
  Variance variance_{};
  std::size_t size_ = 0;
  Kernel<double> plain_;
  Kernel<Jet2> jet_;
};

/// Coordinate jets x^i seeded at p (value p_i, gradient e_i, zero Hessian).
std::vector<Jet2> seed_coordinates(const Point& p);

/// Value, first and second partials of every component of `field` at `p`.
/// Throws DomainError if p is outside the field's chart.
std::vector<Jet2> jet2_eval(const TensorField& field, const Point& p);

/// A Riemannian metric: a (0,2) field, symmetric and positive definite.
class MetricField {
 public:
  MetricField() = default;
  explicit MetricField(TensorField g);

  const TensorField& field() const { return g_; }
  const Chart& chart() const { return g_.chart(); }
  const ChartPtr& chart_ptr() const { return g_.chart_ptr(); }
  int dim() const { return g_.dim(); }

  Vec eval(const Point& p) const { return g_.eval(p); }
  std::vector<Jet2> jet_eval(const Point& p) const { return g_.jet_eval(p); }

  /// Throws DegeneracyError unless g is symmetric (residual < 1e-12 relative)
  /// and positive definite at p.
  void validate(const Point& p) const;

 private:
  TensorField g_;
};

// ---------------------------------------------------------------------------
// Field algebra. Every combinator composes the underlying formulas, so jets of
// the result carry exact derivatives of the composite.
// ---------------------------------------------------------------------------

TensorField constant_field(ChartPtr chart, Variance variance, Vec components);

/// (phi X)^a = phi^a_b X^b
TensorField apply(const TensorField& phi, const TensorField& x);

/// (a o b)^i_j = a^i_k b^k_j
TensorField compose(const TensorField& a, const TensorField& b);

/// Pointwise product of a scalar (0,0) field with any field.
TensorField scale(const TensorField& f, const TensorField& t);
TensorField scale(double s, const TensorField& t);

TensorField add(const TensorField& a, const TensorField& b);

}  // namespace klab
