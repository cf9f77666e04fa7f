#pragma once

#include <span>
#include <vector>

#include "klab/chart.hpp"
#include "klab/tensor_field.hpp"

namespace klab {

/// Levi-Civita data of a metric at one point, built from jets of g.
///
/// Curvature convention: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
/// nabla_[X,Y] Z, with R(d_i, d_j) d_k = R^l_{kij} d_l, and
/// R(X,Y,Z,W) = g(R(X,Y)Z, W). Sectional curvature carries a leading minus:
/// K(X,Y) = -R(X,Y,X,Y) / (|X|^2 |Y|^2 - g(X,Y)^2).
class PointGeometry {
 public:
  PointGeometry(const MetricField& g, const Point& p);

  int dim() const { return n_; }
  const Point& point() const { return p_; }

  double metric(int i, int j) const { return g_[idx(i, j)]; }
  double inverse(int i, int j) const { return ginv_[idx(i, j)]; }
  /// d_m g_ij
  double metric_d(int m, int i, int j) const { return dg_[idx(m, i, j)]; }
  /// Gamma^k_ij
  double christoffel(int k, int i, int j) const { return gamma_[idx(k, i, j)]; }
  /// d_m Gamma^k_ij
  double christoffel_d(int m, int k, int i, int j) const { return dgamma_[idx(m, k, i, j)]; }
  /// R^l_{kij}
  double riemann(int l, int k, int i, int j) const { return riem_[idx(l, k, i, j)]; }

  const Vec& christoffel_array() const { return gamma_; }

  double inner(std::span<const double> x, std::span<const double> y) const;
  double norm(std::span<const double> x) const;
  /// Index lowering: (g x)_i = g_ij x^j.
  Vec lower(std::span<const double> x) const;

  /// R(X,Y)Z as a vector.
  Vec riemann_apply(std::span<const double> x, std::span<const double> y, std::span<const double> z) const;
  /// g(R(X,Y)Z, W)
  double riemann_4(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                   std::span<const double> w) const;
  double sectional(std::span<const double> x, std::span<const double> y) const;

  /// Ric_jk = R^i_{kij} (index contraction).
  Vec ricci() const;
  /// Ric(X,Y) = sum_a R(E_a, X, Y, E_a) over a Gram-Schmidt orthonormal frame.
  /// When `first` is non-empty it is normalised and placed first in the frame.
  Vec ricci_frame_sum(std::span<const double> first = {}) const;

  /// Gram-Schmidt on the coordinate frame, optionally seeded with `first`.
  std::vector<Vec> orthonormal_frame(std::span<const double> first = {}) const;

  /// (nabla_X T) at this point from the jets of T; T of variance (1,0),
  /// (0,1), (1,1) or (0,2).
  Vec covariant(const std::vector<Jet2>& t_jets, Variance variance, std::span<const double> x) const;

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a * n_ + b); }
  std::size_t idx(int a, int b, int c) const { return static_cast<std::size_t>((a * n_ + b) * n_ + c); }
  std::size_t idx(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d);
  }

  Point p_;
  int n_;
  Vec g_, ginv_, dg_, gamma_, dgamma_, riem_;
};

// Operation-level entry points. Each one validates the metric at p.

/// Gamma^k_ij at p, laid out [k][i][j].
Vec christoffel(const MetricField& g, const Point& p);

/// nabla_X T at p, same variance and layout as T.
Vec covariant_derivative(const MetricField& g, const TensorField& t, const TensorField& x, const Point& p);

Vec riemann_apply(const MetricField& g, const TensorField& x, const TensorField& y, const TensorField& z,
                  const Point& p);
double riemann_4(const MetricField& g, const TensorField& x, const TensorField& y, const TensorField& z,
                 const TensorField& w, const Point& p);

/// Ricci tensor at p via the orthonormal-frame sum; layout [i][j].
Vec ricci(const MetricField& g, const Point& p);

double sectional(const MetricField& g, const TensorField& x, const TensorField& y, const Point& p);

/// [X,Y]^a = X^b d_b Y^a - Y^b d_b X^a at p.
Vec lie_bracket(const TensorField& x, const TensorField& y, const Point& p);

/// Directional derivative of a scalar jet along a vector.
double directional(const Jet2& f, std::span<const double> v);

}  // namespace klab
