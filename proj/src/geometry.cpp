#include "klab/geometry.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "klab/errors.hpp"

namespace klab {

PointGeometry::PointGeometry(const MetricField& g, const Point& p) : p_(p), n_(g.dim()) {
  const std::vector<Jet2> jets = g.jet_eval(p);
  const int n = n_;
  const std::size_t n2 = static_cast<std::size_t>(n * n);
  g_.assign(n2, 0.0);
  ginv_.assign(n2, 0.0);
  dg_.assign(n2 * static_cast<std::size_t>(n), 0.0);

  Eigen::MatrixXd m(n, n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = jets[idx(i, j)].value();
      scale = std::max(scale, std::abs(m(i, j)));
    }
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
    throw DegeneracyError("metric is not symmetric at the evaluation point");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw DegeneracyError("metric is singular or not positive definite");
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  if (!inv.allFinite()) throw DegeneracyError("metric inverse is not finite");

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g_[idx(i, j)] = m(i, j);
      ginv_[idx(i, j)] = 0.5 * (inv(i, j) + inv(j, i));
      for (int k = 0; k < n; ++k) dg_[idx(k, i, j)] = jets[idx(i, j)].d(k);
    }
  }

  // S_lij = d_i g_lj + d_j g_il - d_l g_ij and its derivatives.
  const std::size_t n3 = n2 * static_cast<std::size_t>(n);
  const std::size_t n4 = n3 * static_cast<std::size_t>(n);
  Vec s(n3), ds(n4);
  for (int l = 0; l < n; ++l) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Jet2& g_lj = jets[idx(l, j)];
        const Jet2& g_il = jets[idx(i, l)];
        const Jet2& g_ij = jets[idx(i, j)];
        s[idx(l, i, j)] = g_lj.d(i) + g_il.d(j) - g_ij.d(l);
        for (int mm = 0; mm < n; ++mm) {
          ds[idx(mm, l, i, j)] = g_lj.d2(mm, i) + g_il.d2(mm, j) - g_ij.d2(mm, l);
        }
      }
    }
  }

  // d_m g^{kl} = -g^{ka} d_m g_ab g^{bl}
  Vec dginv(n3, 0.0);
  for (int mm = 0; mm < n; ++mm) {
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) acc += ginv_[idx(k, a)] * dg_[idx(mm, a, b)] * ginv_[idx(b, l)];
        }
        dginv[idx(mm, k, l)] = -acc;
      }
    }
  }

  gamma_.assign(n3, 0.0);
  dgamma_.assign(n4, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += ginv_[idx(k, l)] * s[idx(l, i, j)];
        gamma_[idx(k, i, j)] = 0.5 * acc;
        for (int mm = 0; mm < n; ++mm) {
          double dacc = 0.0;
          for (int l = 0; l < n; ++l) {
            dacc += dginv[idx(mm, k, l)] * s[idx(l, i, j)] + ginv_[idx(k, l)] * ds[idx(mm, l, i, j)];
          }
          dgamma_[idx(mm, k, i, j)] = 0.5 * dacc;
        }
      }
    }
  }

  // R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik
  riem_.assign(n4, 0.0);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double r = dgamma_[idx(i, l, j, k)] - dgamma_[idx(j, l, i, k)];
          for (int mm = 0; mm < n; ++mm) {
            r += gamma_[idx(l, i, mm)] * gamma_[idx(mm, j, k)] - gamma_[idx(l, j, mm)] * gamma_[idx(mm, i, k)];
          }
          riem_[idx(l, k, i, j)] = r;
        }
      }
    }
  }
}

double PointGeometry::inner(std::span<const double> x, std::span<const double> y) const {
  double acc = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) acc += g_[idx(i, j)] * x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
  }
  return acc;
}

double PointGeometry::norm(std::span<const double> x) const { return std::sqrt(std::max(inner(x, x), 0.0)); }

Vec PointGeometry::lower(std::span<const double> x) const {
  Vec out(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(i)] += g_[idx(i, j)] * x[static_cast<std::size_t>(j)];
  }
  return out;
}

Vec PointGeometry::riemann_apply(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> z) const {
  Vec out(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    if (xi == 0.0) continue;
    for (int j = 0; j < n_; ++j) {
      const double xy = xi * y[static_cast<std::size_t>(j)];
      if (xy == 0.0) continue;
      for (int k = 0; k < n_; ++k) {
        const double xyz = xy * z[static_cast<std::size_t>(k)];
        if (xyz == 0.0) continue;
        for (int l = 0; l < n_; ++l) out[static_cast<std::size_t>(l)] += riem_[idx(l, k, i, j)] * xyz;
      }
    }
  }
  return out;
}

double PointGeometry::riemann_4(std::span<const double> x, std::span<const double> y, std::span<const double> z,
                                std::span<const double> w) const {
  return inner(riemann_apply(x, y, z), w);
}

double PointGeometry::sectional(std::span<const double> x, std::span<const double> y) const {
  const double xx = inner(x, x);
  const double yy = inner(y, y);
  const double xy = inner(x, y);
  const double denom = xx * yy - xy * xy;
  if (!(denom > 1e-12 * xx * yy)) throw DegeneracyError("sectional curvature of a degenerate plane");
  return -riemann_4(x, y, x, y) / denom;
}

Vec PointGeometry::ricci() const {
  Vec out(static_cast<std::size_t>(n_ * n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n_; ++i) acc += riem_[idx(i, k, i, j)];
      out[idx(j, k)] = acc;
    }
  }
  return out;
}

std::vector<Vec> PointGeometry::orthonormal_frame(std::span<const double> first) const {
  std::vector<Vec> candidates;
  if (!first.empty()) candidates.emplace_back(first.begin(), first.end());
  for (int i = 0; i < n_; ++i) {
    Vec e(static_cast<std::size_t>(n_), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    candidates.push_back(std::move(e));
  }
  std::vector<Vec> frame;
  for (Vec v : candidates) {
    if (static_cast<int>(frame.size()) == n_) break;
    const double original = norm(v);
    if (original == 0.0) continue;
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& e : frame) {
        const double c = inner(v, e);
        for (int a = 0; a < n_; ++a) v[static_cast<std::size_t>(a)] -= c * e[static_cast<std::size_t>(a)];
      }
    }
    const double nv = norm(v);
    if (nv < 1e-10 * original) continue;
    for (double& c : v) c /= nv;
    frame.push_back(std::move(v));
  }
  if (static_cast<int>(frame.size()) != n_) throw DegeneracyError("could not build an orthonormal frame");
  return frame;
}

Vec PointGeometry::ricci_frame_sum(std::span<const double> first) const {
  const std::vector<Vec> frame = orthonormal_frame(first);
  std::vector<Vec> lowered;
  lowered.reserve(frame.size());
  for (const Vec& e : frame) lowered.push_back(lower(e));
  Vec out(static_cast<std::size_t>(n_ * n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) {
      double acc = 0.0;
      for (std::size_t a = 0; a < frame.size(); ++a) {
        // g(R(E_a, d_j) d_k, E_a) = R^l_{k i j} E_a^i (E_a)_l
        for (int i = 0; i < n_; ++i) {
          const double ei = frame[a][static_cast<std::size_t>(i)];
          if (ei == 0.0) continue;
          for (int l = 0; l < n_; ++l) acc += riem_[idx(l, k, i, j)] * ei * lowered[a][static_cast<std::size_t>(l)];
        }
      }
      out[idx(j, k)] = acc;
    }
  }
  return out;
}

Vec PointGeometry::covariant(const std::vector<Jet2>& t_jets, Variance variance, std::span<const double> x) const {
  const bool supported = variance == kVector || variance == kCovector || variance == kEndomorphism ||
                         variance == kBilinear;
  if (!supported) {
    std::ostringstream os;
    os << "covariant derivative of a (" << variance.upper << "," << variance.lower << ") tensor is not supported";
    throw UnsupportedError(os.str());
  }
  const int rank = variance.rank();
  const std::size_t size = ipow(n_, rank);
  if (t_jets.size() != size) throw UsageError("tensor component count does not match its variance");

  Vec out(size, 0.0);
  std::vector<int> digits(static_cast<std::size_t>(rank));
  for (std::size_t f = 0; f < size; ++f) {
    std::size_t rem = f;
    for (int s = rank - 1; s >= 0; --s) {
      digits[static_cast<std::size_t>(s)] = static_cast<int>(rem % static_cast<std::size_t>(n_));
      rem /= static_cast<std::size_t>(n_);
    }
    double acc = 0.0;
    for (int c = 0; c < n_; ++c) {
      const double xc = x[static_cast<std::size_t>(c)];
      if (xc == 0.0) continue;
      double term = t_jets[f].d(c);
      for (int s = 0; s < rank; ++s) {
        const bool upper = s < variance.upper;
        const int own = digits[static_cast<std::size_t>(s)];
        std::size_t stride = 1;
        for (int r = rank - 1; r > s; --r) stride *= static_cast<std::size_t>(n_);
        const std::size_t base = f - static_cast<std::size_t>(own) * stride;
        for (int d = 0; d < n_; ++d) {
          const double td = t_jets[base + static_cast<std::size_t>(d) * stride].value();
          if (upper) {
            term += gamma_[idx(own, c, d)] * td;
          } else {
            term -= gamma_[idx(d, c, own)] * td;
          }
        }
      }
      acc += xc * term;
    }
    out[f] = acc;
  }
  return out;
}

Vec christoffel(const MetricField& g, const Point& p) { return PointGeometry(g, p).christoffel_array(); }

Vec covariant_derivative(const MetricField& g, const TensorField& t, const TensorField& x, const Point& p) {
  if (x.variance() != kVector) throw UnsupportedError("covariant derivative direction must be a vector field");
  const PointGeometry geo(g, p);
  return geo.covariant(t.jet_eval(p), t.variance(), x.eval(p));
}

Vec riemann_apply(const MetricField& g, const TensorField& x, const TensorField& y, const TensorField& z,
                  const Point& p) {
  const PointGeometry geo(g, p);
  return geo.riemann_apply(x.eval(p), y.eval(p), z.eval(p));
}

double riemann_4(const MetricField& g, const TensorField& x, const TensorField& y, const TensorField& z,
                 const TensorField& w, const Point& p) {
  const PointGeometry geo(g, p);
  return geo.riemann_4(x.eval(p), y.eval(p), z.eval(p), w.eval(p));
}

Vec ricci(const MetricField& g, const Point& p) { return PointGeometry(g, p).ricci_frame_sum(); }

double sectional(const MetricField& g, const TensorField& x, const TensorField& y, const Point& p) {
  const PointGeometry geo(g, p);
  return geo.sectional(x.eval(p), y.eval(p));
}

Vec lie_bracket(const TensorField& x, const TensorField& y, const Point& p) {
  if (x.variance() != kVector || y.variance() != kVector) throw UnsupportedError("lie_bracket expects vector fields");
  const std::vector<Jet2> xj = x.jet_eval(p);
  const std::vector<Jet2> yj = y.jet_eval(p);
  const int n = x.dim();
  Vec out(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int b = 0; b < n; ++b) {
      acc += xj[static_cast<std::size_t>(b)].value() * yj[static_cast<std::size_t>(a)].d(b) -
             yj[static_cast<std::size_t>(b)].value() * xj[static_cast<std::size_t>(a)].d(b);
    }
    out[static_cast<std::size_t>(a)] = acc;
  }
  return out;
}

double directional(const Jet2& f, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += f.d(static_cast<int>(i)) * v[i];
  return acc;
}

}  // namespace klab
