#include "klab/forms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Dense>

#include "klab/errors.hpp"

namespace klab {

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

std::vector<IndexMask> masks_of_degree(int dim, int degree) {
  std::vector<IndexMask> out;
  if (degree < 0 || degree > dim) return out;
  out.reserve(binomial(dim, degree));
  // For a fixed popcount, numeric order of the bitmask is colex order.
  const IndexMask end = IndexMask{1} << dim;
  for (IndexMask m = 0; m < end; ++m) {
    if (std::popcount(m) == degree) out.push_back(m);
  }
  return out;
}

std::size_t mask_rank(IndexMask mask) {
  std::size_t rank = 0;
  int i = 0;
  while (mask != 0) {
    const int c = std::countr_zero(mask);
    ++i;
    rank += binomial(c, i);
    mask &= mask - 1;
  }
  return rank;
}

namespace {

std::vector<int> mask_indices(IndexMask mask) {
  std::vector<int> out;
  while (mask != 0) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

// Sign of the permutation sorting `indices`, or 0 when an index repeats.
int sorting_sign(std::span<const int> indices, IndexMask& mask) {
  mask = 0;
  int inversions = 0;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const IndexMask bit = IndexMask{1} << indices[a];
    if (mask & bit) return 0;
    mask |= bit;
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      if (indices[a] > indices[b]) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

void require_same_shape(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) throw UsageError("forms of different shape");
}

}  // namespace

KForm::KForm(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1 || dim > 31) throw UsageError("form dimension out of range");
  if (degree < 0 || degree > dim) throw UsageError("form degree exceeds the dimension");
  comps_.assign(binomial(dim, degree), 0.0);
}

double KForm::component(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != degree_) throw UsageError("wrong number of form indices");
  IndexMask mask = 0;
  const int sign = sorting_sign(indices, mask);
  return sign == 0 ? 0.0 : sign * at_mask(mask);
}

void KForm::set_component(std::span<const int> indices, double value) {
  if (static_cast<int>(indices.size()) != degree_) throw UsageError("wrong number of form indices");
  IndexMask mask = 0;
  const int sign = sorting_sign(indices, mask);
  if (sign == 0) throw UsageError("repeated index in a form component");
  at_mask(mask) = sign * value;
}

double KForm::evaluate(std::span<const Vec> vectors) const {
  if (static_cast<int>(vectors.size()) != degree_) throw UsageError("form evaluated on the wrong number of vectors");
  if (degree_ == 0) return comps_[0];
  const std::vector<IndexMask> masks = masks_of_degree(dim_, degree_);
  double acc = 0.0;
  Eigen::MatrixXd m(degree_, degree_);
  for (std::size_t r = 0; r < masks.size(); ++r) {
    if (comps_[r] == 0.0) continue;
    const std::vector<int> idx = mask_indices(masks[r]);
    for (int i = 0; i < degree_; ++i) {
      for (int j = 0; j < degree_; ++j) {
        m(i, j) = vectors[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      }
    }
    acc += comps_[r] * m.determinant();
  }
  return acc;
}

double KForm::max_abs() const {
  double m = 0.0;
  for (double c : comps_) m = std::max(m, std::abs(c));
  return m;
}

KForm operator+(const KForm& a, const KForm& b) {
  require_same_shape(a, b);
  KForm r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.components()[i] += b.components()[i];
  return r;
}

KForm operator-(const KForm& a, const KForm& b) {
  require_same_shape(a, b);
  KForm r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.components()[i] -= b.components()[i];
  return r;
}

KForm operator*(double s, const KForm& a) {
  KForm r = a;
  for (double& c : r.components()) c *= s;
  return r;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.dim() != b.dim()) throw UsageError("wedge of forms on different dimensions");
  if (a.degree() + b.degree() > a.dim()) throw UsageError("wedge product degree exceeds the dimension");
  KForm r(a.dim(), a.degree() + b.degree());
  const std::vector<IndexMask> ma = masks_of_degree(a.dim(), a.degree());
  const std::vector<IndexMask> mb = masks_of_degree(b.dim(), b.degree());
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const double ca = a.components()[i];
    if (ca == 0.0) continue;
    for (std::size_t j = 0; j < mb.size(); ++j) {
      const double cb = b.components()[j];
      if (cb == 0.0 || (ma[i] & mb[j]) != 0) continue;
      // Shuffle sign: one transposition per pair (x in A, y in B) with x > y.
      int inversions = 0;
      for (IndexMask rest = mb[j]; rest != 0; rest &= rest - 1) {
        const int y = std::countr_zero(rest);
        inversions += std::popcount(ma[i] >> (y + 1));
      }
      const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
      r.at_mask(ma[i] | mb[j]) += sign * ca * cb;
    }
  }
  return r;
}

KForm KFormField::eval(const Point& p) const {
  chart_->require(p);
  KForm f(dim_, degree_);
  evaluate<double>(std::span<const double>(p.coords), f.components());
  return f;
}

std::vector<Jet2> KFormField::jet_eval(const Point& p) const {
  chart_->require(p);
  const std::vector<Jet2> x = seed_coordinates(p);
  std::vector<Jet2> out(size_);
  evaluate<Jet2>(std::span<const Jet2>(x), out);
  return out;
}

KFormField one_form(const TensorField& covector) {
  if (covector.variance() != kCovector) throw UnsupportedError("one_form expects a (0,1) field");
  return KFormField::make(covector.chart_ptr(), 1, [covector](auto xs, auto out) {
    using T = std::remove_const_t<typename decltype(xs)::element_type>;
    covector.evaluate<T>(xs, out);
  });
}

KFormField two_form_from(const MetricField& g, const TensorField& phi) {
  if (phi.variance() != kEndomorphism) throw UnsupportedError("two_form_from expects a (1,1) field");
  const int n = g.dim();
  const TensorField gf = g.field();
  return KFormField::make(g.chart_ptr(), 2, [gf, phi, n](auto xs, auto out) {
    using T = std::remove_const_t<typename decltype(xs)::element_type>;
    const std::vector<T> gv = gf.evaluate<T>(xs);
    const std::vector<T> pv = phi.evaluate<T>(xs);
    for (int b = 1; b < n; ++b) {
      for (int a = 0; a < b; ++a) {
        T acc(0.0);
        for (int c = 0; c < n; ++c) {
          acc += gv[static_cast<std::size_t>(a * n + c)] * pv[static_cast<std::size_t>(c * n + b)];
        }
        out[mask_rank((IndexMask{1} << a) | (IndexMask{1} << b))] = acc;
      }
    }
  });
}

KForm exterior_derivative(const KFormField& omega, const Point& p) {
  if (omega.degree() >= omega.dim()) throw UsageError("exterior derivative would exceed the top degree");
  const std::vector<Jet2> jets = omega.jet_eval(p);
  KForm r(omega.dim(), omega.degree() + 1);
  for (IndexMask m : masks_of_degree(omega.dim(), omega.degree() + 1)) {
    const std::vector<int> idx = mask_indices(m);
    double acc = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const IndexMask rest = m & ~(IndexMask{1} << idx[j]);
      const double term = jets[mask_rank(rest)].d(idx[j]);
      acc += (j % 2 == 0) ? term : -term;
    }
    r.at_mask(m) = acc;
  }
  return r;
}

KForm exterior_derivative_twice(const KFormField& omega, const Point& p) {
  if (omega.degree() + 2 > omega.dim()) throw UsageError("second exterior derivative would exceed the top degree");
  const std::vector<Jet2> jets = omega.jet_eval(p);
  // d_a (d omega)_M = sum_i (-1)^i d_a d_{m_i} omega_{M \ m_i}
  auto d_of_domega = [&](IndexMask m, int a) {
    const std::vector<int> idx = mask_indices(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const IndexMask rest = m & ~(IndexMask{1} << idx[i]);
      const double term = jets[mask_rank(rest)].d2(a, idx[i]);
      acc += (i % 2 == 0) ? term : -term;
    }
    return acc;
  };
  KForm r(omega.dim(), omega.degree() + 2);
  for (IndexMask m : masks_of_degree(omega.dim(), omega.degree() + 2)) {
    const std::vector<int> idx = mask_indices(m);
    double acc = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const IndexMask rest = m & ~(IndexMask{1} << idx[j]);
      const double term = d_of_domega(rest, idx[j]);
      acc += (j % 2 == 0) ? term : -term;
    }
    r.at_mask(m) = acc;
  }
  return r;
}

}  // namespace klab
