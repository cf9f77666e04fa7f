#include "klab/tensor_field.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "klab/errors.hpp"

namespace klab {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

Vec TensorField::eval(const Point& p) const {
  chart_->require(p);
  Vec out(size_);
  evaluate<double>(std::span<const double>(p.coords), out);
  return out;
}

std::vector<Jet2> TensorField::jet_eval(const Point& p) const {
  chart_->require(p);
  const std::vector<Jet2> x = seed_coordinates(p);
  std::vector<Jet2> out(size_);
  evaluate<Jet2>(std::span<const Jet2>(x), out);
  return out;
}

std::vector<Jet2> seed_coordinates(const Point& p) {
  const int n = p.dim();
  if (n > kMaxDim) throw UnsupportedError("chart dimension exceeds the jet carrier capacity");
  std::vector<Jet2> x;
  x.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x.push_back(Jet2::variable(n, i, p.coords[static_cast<std::size_t>(i)]));
  return x;
}

std::vector<Jet2> jet2_eval(const TensorField& field, const Point& p) { return field.jet_eval(p); }

MetricField::MetricField(TensorField g) : g_(std::move(g)) {
  if (!g_.valid() || g_.variance() != kBilinear) {
    throw UnsupportedError("a metric must be a (0,2) tensor field");
  }
}

void MetricField::validate(const Point& p) const {
  const int n = dim();
  const Vec g = eval(p);
  Eigen::MatrixXd m(n, n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = g[static_cast<std::size_t>(i * n + j)];
      scale = std::max(scale, std::abs(m(i, j)));
    }
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1.0)) {
    std::ostringstream os;
    os << "metric is not symmetric (residual " << asym << ")";
    throw DegeneracyError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream os;
    os << "metric is not positive definite (smallest eigenvalue " << es.eigenvalues().minCoeff() << ")";
    throw DegeneracyError(os.str());
  }
}

TensorField constant_field(ChartPtr chart, Variance variance, Vec components) {
  const std::size_t expected = ipow(chart->dim(), variance.rank());
  if (components.size() != expected) throw UsageError("constant field has the wrong number of components");
  return TensorField::make(std::move(chart), variance, [c = std::move(components)](auto x, auto out) {
    (void)x;
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i];
  });
}

namespace {

void require_same_chart(const TensorField& a, const TensorField& b) {
  if (a.dim() != b.dim()) throw UsageError("fields live on charts of different dimension");
}

template <class T>
using ElemOf = typename std::remove_cvref_t<T>::element_type;

}  // namespace

TensorField apply(const TensorField& phi, const TensorField& x) {
  require_same_chart(phi, x);
  if (phi.variance() != kEndomorphism || x.variance() != kVector) {
    throw UnsupportedError("apply expects a (1,1) field and a vector field");
  }
  const int n = phi.dim();
  return TensorField::make(phi.chart_ptr(), kVector, [phi, x, n](auto xs, auto out) {
    using T = std::remove_const_t<ElemOf<decltype(xs)>>;
    const std::vector<T> a = phi.evaluate<T>(xs);
    const std::vector<T> v = x.evaluate<T>(xs);
    for (int i = 0; i < n; ++i) {
      T s(0.0);
      for (int k = 0; k < n; ++k) s += a[static_cast<std::size_t>(i * n + k)] * v[static_cast<std::size_t>(k)];
      out[static_cast<std::size_t>(i)] = s;
    }
  });
}

TensorField compose(const TensorField& a, const TensorField& b) {
  require_same_chart(a, b);
  if (a.variance() != kEndomorphism || b.variance() != kEndomorphism) {
    throw UnsupportedError("compose expects two (1,1) fields");
  }
  const int n = a.dim();
  return TensorField::make(a.chart_ptr(), kEndomorphism, [a, b, n](auto xs, auto out) {
    using T = std::remove_const_t<ElemOf<decltype(xs)>>;
    const std::vector<T> ma = a.evaluate<T>(xs);
    const std::vector<T> mb = b.evaluate<T>(xs);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        T s(0.0);
        for (int k = 0; k < n; ++k) {
          s += ma[static_cast<std::size_t>(i * n + k)] * mb[static_cast<std::size_t>(k * n + j)];
        }
        out[static_cast<std::size_t>(i * n + j)] = s;
      }
    }
  });
}

TensorField scale(const TensorField& f, const TensorField& t) {
  require_same_chart(f, t);
  if (f.variance() != kScalar) throw UnsupportedError("scale expects a scalar (0,0) field");
  return TensorField::make(t.chart_ptr(), t.variance(), [f, t](auto xs, auto out) {
    using T = std::remove_const_t<ElemOf<decltype(xs)>>;
    const std::vector<T> s = f.evaluate<T>(xs);
    t.evaluate<T>(xs, out);
    for (auto& c : out) c = c * s[0];
  });
}

TensorField scale(double s, const TensorField& t) {
  return TensorField::make(t.chart_ptr(), t.variance(), [s, t](auto xs, auto out) {
    using T = std::remove_const_t<ElemOf<decltype(xs)>>;
    t.evaluate<T>(xs, out);
    for (auto& c : out) c = c * s;
  });
}

TensorField add(const TensorField& a, const TensorField& b) {
  require_same_chart(a, b);
  if (a.variance() != b.variance()) throw UnsupportedError("add expects fields of equal variance");
  return TensorField::make(a.chart_ptr(), a.variance(), [a, b](auto xs, auto out) {
    using T = std::remove_const_t<ElemOf<decltype(xs)>>;
    a.evaluate<T>(xs, out);
    const std::vector<T> other = b.evaluate<T>(xs);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += other[i];
  });
}

}  // namespace klab
