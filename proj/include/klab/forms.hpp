#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "klab/chart.hpp"
#include "klab/tensor_field.hpp"

namespace klab {

using IndexMask = std::uint32_t;

/// Strictly increasing index sets of size k out of {0..dim-1}, as bitmasks,
/// in colexicographic order (the order of `mask_rank`).
std::vector<IndexMask> masks_of_degree(int dim, int degree);
std::size_t mask_rank(IndexMask mask);
std::size_t binomial(int n, int k);

/// The value of a differential k-form at a point. Only the components on
/// strictly increasing index sets are stored, so the form is antisymmetric
/// by construction.
///
/// Normalisation is the determinant convention: (dx^0 ^ dx^1)(d_0, d_1) = 1
/// and omega(v_1..v_k) = sum_I omega_I det[v_j^{I_i}].
class KForm {
 public:
  KForm() = default;
  KForm(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return comps_.size(); }

  double at_mask(IndexMask mask) const { return comps_[mask_rank(mask)]; }
  double& at_mask(IndexMask mask) { return comps_[mask_rank(mask)]; }

  /// Component for an arbitrary index tuple: signed by the sorting
  /// permutation, zero on repeated indices.
  double component(std::span<const int> indices) const;
  void set_component(std::span<const int> indices, double value);

  double evaluate(std::span<const Vec> vectors) const;

  const Vec& components() const { return comps_; }
  Vec& components() { return comps_; }

  double max_abs() const;

 private:
  int dim_ = 0;
  int degree_ = 0;
  Vec comps_;
};

KForm operator+(const KForm& a, const KForm& b);
KForm operator-(const KForm& a, const KForm& b);
KForm operator*(double s, const KForm& a);

/// Shuffle-sum wedge product; degree overflow throws UsageError.
KForm wedge(const KForm& a, const KForm& b);

/// A field of k-forms, components in `masks_of_degree` order.
class KFormField {
 public:
  KFormField() = default;

  template <class Fn>
  static KFormField make(ChartPtr chart, int degree, Fn fn) {
    KFormField f;
    f.degree_ = degree;
    f.dim_ = chart->dim();
    f.size_ = binomial(f.dim_, degree);
    f.chart_ = std::move(chart);
    f.plain_ = [fn](std::span<const double> x, std::span<double> out) { fn(x, out); };
    f.jet_ = [fn](std::span<const Jet2> x, std::span<Jet2> out) { fn(x, out); };
    return f;
  }

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  std::size_t size() const { return size_; }
  const Chart& chart() const { return *chart_; }
  const ChartPtr& chart_ptr() const { return chart_; }

  template <class T>
  void evaluate(std::span<const T> x, std::span<T> out) const {
    std::fill(out.begin(), out.end(), T(0.0));
    if constexpr (std::is_same_v<T, double>) {
      plain_(x, out);
    } else {
      jet_(x, out);
    }
  }

  KForm eval(const Point& p) const;
  std::vector<Jet2> jet_eval(const Point& p) const;

 private:
  ChartPtr chart_;
  int degree_ = 0;
  int dim_ = 0;
  std::size_t size_ = 0;
  TensorField::Kernel<double> plain_;
  TensorField::Kernel<Jet2> jet_;
};

/// A (0,1) tensor field viewed as a 1-form field.
KFormField one_form(const TensorField& covector);

/// Omega(X,Y) = g(X, phi Y), i.e. Omega_ab = g_ac phi^c_b.
KFormField two_form_from(const MetricField& g, const TensorField& phi);

/// (d omega)_{m_0..m_k} = sum_j (-1)^j d_{m_j} omega_{m_0..^m_j..m_k} at p.
KForm exterior_derivative(const KFormField& omega, const Point& p);

/// d(d omega) at p, from the second derivatives of omega's components.
KForm exterior_derivative_twice(const KFormField& omega, const Point& p);

}  // namespace klab
