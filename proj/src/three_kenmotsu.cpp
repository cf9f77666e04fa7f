#include "klab/three_kenmotsu.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "klab/errors.hpp"

namespace klab {

namespace {

Vec mat_vec(std::span<const double> m, std::span<const double> v) {
  const std::size_t n = v.size();
  Vec out(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < n; ++b) acc += m[a * n + b] * v[b];
    out[a] = acc;
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vec axpy(std::span<const double> x, double s, std::span<const double> y) {
  Vec out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * y[i];
  return out;
}

Vec values_of(const std::vector<Jet2>& jets) {
  Vec out;
  out.reserve(jets.size());
  for (const Jet2& j : jets) out.push_back(j.value());
  return out;
}

double frobenius(std::span<const double> m) { return std::sqrt(dot(m, m)); }

// Unit (in g) H-vectors: the H-projection of each coordinate direction and of
// each sampled direction, dropping projections shorter than 1e-6.
std::vector<Vec> unit_h_vectors(const PointGeometry& geo, const Vec& xi, const Vec& eta, const std::vector<Vec>& dirs,
                                bool include_frame) {
  const int n = geo.dim();
  std::vector<Vec> out;
  auto push = [&](const Vec& d) {
    double cn = std::sqrt(dot(d, d));
    Vec h = axpy(d, -dot(eta, d), xi);
    if (std::sqrt(dot(h, h)) < 1e-6 * cn) return;
    const double gn = geo.norm(h);
    if (!(gn > 0.0)) return;
    for (double& c : h) c /= gn;
    out.push_back(std::move(h));
  };
  if (include_frame) {
    for (int i = 0; i < n; ++i) {
      Vec e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      push(e);
    }
  }
  for (const Vec& d : dirs) push(d);
  return out;
}

// Jets of the H-projection of the constant field v: v - eta(v) xi.
std::vector<Jet2> projected_constant_jets(const std::vector<Jet2>& xi, const std::vector<Jet2>& eta,
                                          std::span<const double> v) {
  Jet2 eta_v(0.0);
  for (std::size_t b = 0; b < v.size(); ++b) eta_v += eta[b] * v[b];
  std::vector<Jet2> out(v.size());
  for (std::size_t a = 0; a < v.size(); ++a) out[a] = Jet2(v[a]) - eta_v * xi[a];
  return out;
}

Vec second_fundamental_at(const PointGeometry& geo, const std::vector<Jet2>& xi, const std::vector<Jet2>& eta,
                          std::span<const double> x, std::span<const double> y) {
  const std::vector<Jet2> yhat = projected_constant_jets(xi, eta, y);
  const Vec nabla = geo.covariant(yhat, kVector, x);
  const Vec xi_v = values_of(xi);
  const Vec eta_v = values_of(eta);
  const double normal = dot(eta_v, nabla);
  Vec out(xi_v.size());
  for (std::size_t a = 0; a < out.size(); ++a) out[a] = normal * xi_v[a];
  return out;
}

struct PhiValues {
  std::array<Vec, 3> phi;
  Vec xi;
  Vec eta;
};

PhiValues phi_values(const ThreeKenmotsuStructure& t, const Point& p) {
  return {{t.phi(1).eval(p), t.phi(2).eval(p), t.phi(3).eval(p)}, t.xi().eval(p), t.eta().eval(p)};
}

void require_alpha(int alpha) {
  if (alpha < 1 || alpha > 3) throw UsageError("structure index alpha must be 1, 2 or 3");
}

CheckReport merge_reports(const CheckSpec& spec, const std::vector<CheckReport>& parts) {
  CheckReport r;
  r.id = spec.id;
  r.anchor = spec.anchor;
  r.tolerance = spec.tolerance;
  double worst = -1.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const CheckReport& p = parts[i];
    r.parts.push_back({i < spec.parts.size() ? spec.parts[i] : p.id, p.max_residual});
    if (p.max_residual > worst) {
      worst = p.max_residual;
      r.worst_point = p.worst_point;
      r.worst_vector = p.worst_vector;
    }
    r.points = std::max(r.points, p.points);
    r.vectors = std::max(r.vectors, p.vectors);
    r.seed = p.seed;
  }
  r.max_residual = std::max(worst, 0.0);
  r.decide();
  return r;
}

}  // namespace

ThreeKenmotsuStructure::ThreeKenmotsuStructure(std::array<TensorField, 3> phis, TensorField xi, TensorField eta,
                                               MetricField g, std::optional<WarpedProductSpec> source)
    : phis_(std::move(phis)), xi_(std::move(xi)), eta_(std::move(eta)), g_(std::move(g)), source_(std::move(source)) {
  if (dim() % 4 != 1) {
    std::ostringstream os;
    os << "a 3-Kenmotsu structure needs dimension 4n+1, got " << dim();
    throw StructuralError(os.str());
  }
  for (int a = 1; a <= 3; ++a) (void)structure(a);  // shape checks
}

const TensorField& ThreeKenmotsuStructure::phi(int alpha) const {
  require_alpha(alpha);
  return phis_[static_cast<std::size_t>(alpha - 1)];
}

AlmostContactMetricStructure ThreeKenmotsuStructure::structure(int alpha) const {
  return AlmostContactMetricStructure(phi(alpha), xi_, eta_, g_);
}

HVector project_H(const ThreeKenmotsuStructure& t, const Point& p, std::span<const double> v) {
  if (static_cast<int>(v.size()) != t.dim()) throw UsageError("vector has the wrong number of components");
  const Vec xi = t.xi().eval(p);
  const Vec eta = t.eta().eval(p);
  return {p, axpy(v, -dot(eta, v), xi)};
}

CheckReport verify_triple(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol, Execution exec) {
  const CheckSpec spec{"triple.relations", "phi_k = phi_i o phi_j for even permutations (i,j,k)", tol,
                       {"phi3=phi1phi2", "phi1=phi2phi3", "phi2=phi3phi1"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        const PointGeometry geo(t.g(), p);
        const PhiValues pv = phi_values(t, p);
        ResidualTracker tr(3);
        constexpr int kPerm[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
        for (const Vec& v : unit_test_vectors(geo, dirs)) {
          for (int r = 0; r < 3; ++r) {
            const auto& [i, j, k] = kPerm[r];
            const Vec lhs = mat_vec(pv.phi[static_cast<std::size_t>(k)], v);
            const Vec rhs = mat_vec(pv.phi[static_cast<std::size_t>(i)], mat_vec(pv.phi[static_cast<std::size_t>(j)], v));
            tr.update(static_cast<std::size_t>(r), geo.norm(axpy(lhs, -1.0, rhs)), v);
          }
        }
        return tr.take();
      },
      exec);
}

CheckReport check_anticommutativity(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                    Execution exec) {
  const CheckSpec spec{"triple.anticommute", "phi_i phi_j + phi_j phi_i = 0 on H", tol, {"12", "23", "31"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        const PointGeometry geo(t.g(), p);
        const PhiValues pv = phi_values(t, p);
        ResidualTracker tr(3);
        constexpr int kPair[3][2] = {{0, 1}, {1, 2}, {2, 0}};
        for (const Vec& v : unit_h_vectors(geo, pv.xi, pv.eta, dirs, true)) {
          for (int r = 0; r < 3; ++r) {
            const auto& pi = pv.phi[static_cast<std::size_t>(kPair[r][0])];
            const auto& pj = pv.phi[static_cast<std::size_t>(kPair[r][1])];
            const Vec s = axpy(mat_vec(pi, mat_vec(pj, v)), 1.0, mat_vec(pj, mat_vec(pi, v)));
            tr.update(static_cast<std::size_t>(r), geo.norm(s), v);
          }
        }
        return tr.take();
      },
      exec);
}

ThreeKenmotsuStructure compose_third(const TensorField& phi1, const TensorField& phi2, const TensorField& eta,
                                     const TensorField& xi, const MetricField& g, const SampleSet& probe, double tol) {
  const std::vector<double> worst = map_indices<double>(
      probe.points.size(),
      [&](std::size_t i) {
        const Point& p = probe.points[i];
        const PointGeometry geo(g, p);
        const Vec a = phi1.eval(p);
        const Vec b = phi2.eval(p);
        double w = 0.0;
        for (const Vec& v : unit_test_vectors(geo, probe.vectors[i])) {
          const Vec s = axpy(mat_vec(a, mat_vec(b, v)), 1.0, mat_vec(b, mat_vec(a, v)));
          const double r = geo.norm(s);
          w = std::max(w, std::isnan(r) ? std::numeric_limits<double>::infinity() : r);
        }
        return w;
      },
      Execution::serial);
  double max_residual = 0.0;
  for (double w : worst) max_residual = std::max(max_residual, w);
  if (!(max_residual < tol)) {
    std::ostringstream os;
    os << "phi1 and phi2 do not anticommute (max residual " << max_residual << ")";
    throw PreconditionError(os.str(), max_residual);
  }
  return ThreeKenmotsuStructure({phi1, phi2, compose(phi1, phi2)}, xi, eta, g);
}

double holomorphic_sectional(const PointGeometry& geo, std::span<const double> phi, std::span<const double> x) {
  const Vec px = mat_vec(phi, x);
  const double xx = geo.inner(x, x);
  return -geo.riemann_4(x, px, x, px) / (xx * xx);
}

double holomorphic_sectional(const ThreeKenmotsuStructure& t, int alpha, const HVector& x) {
  require_alpha(alpha);
  const PointGeometry geo(t.g(), x.base);
  const double len = geo.norm(x.v);
  if (!(len > 1e-8)) throw DegeneracyError("holomorphic sectional curvature of a vanishing vector");
  const Vec eta = t.eta().eval(x.base);
  if (std::abs(dot(eta, x.v)) >= 1e-12 * len) throw DomainError("vector is not in the distribution H");
  return holomorphic_sectional(geo, t.phi(alpha).eval(x.base), x.v);
}

CheckReport check_h_sum(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol, Execution exec) {
  const CheckSpec spec{"thm.h_sum", "H_1(X) + H_2(X) + H_3(X) = -3 for X in H", tol, {"sum_plus_3"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        const PointGeometry geo(t.g(), p);
        const PhiValues pv = phi_values(t, p);
        ResidualTracker tr(1);
        for (const Vec& x : unit_h_vectors(geo, pv.xi, pv.eta, dirs, false)) {
          double sum = 0.0;
          for (const Vec& phi : pv.phi) sum += holomorphic_sectional(geo, phi, x);
          tr.update(0, sum + 3.0, x);
        }
        return tr.take();
      },
      exec);
}

namespace {

Vec phi_identity_residual(const PointGeometry& geo, std::span<const double> phi, std::span<const double> x,
                          std::span<const double> y, std::span<const double> z) {
  const Vec px = mat_vec(phi, x);
  const Vec py = mat_vec(phi, y);
  const Vec pz = mat_vec(phi, z);
  const Vec lhs = geo.riemann_apply(x, y, pz);
  const Vec rxyz = mat_vec(phi, geo.riemann_apply(x, y, z));
  const double a = geo.inner(py, z);
  const double b = geo.inner(px, z);
  const double c = geo.inner(y, z);
  const double d = geo.inner(x, z);
  Vec out(lhs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = lhs[i] - (a * x[i] - b * y[i] + c * px[i] - d * py[i] + rxyz[i]);
  }
  return out;
}

}  // namespace

double check_phi_curvature_identity(const ThreeKenmotsuStructure& t, int alpha, std::span<const double> x,
                                    std::span<const double> y, std::span<const double> z, const Point& p) {
  require_alpha(alpha);
  const PointGeometry geo(t.g(), p);
  return geo.norm(phi_identity_residual(geo, t.phi(alpha).eval(p), x, y, z));
}

double check_phi_curvature_identity(const ThreeKenmotsuStructure& t, int alpha, std::span<const double> x,
                                    std::span<const double> y, std::span<const double> z,
                                    std::span<const double> w, const Point& p) {
  require_alpha(alpha);
  const PointGeometry geo(t.g(), p);
  const Vec phi = t.phi(alpha).eval(p);
  return std::abs(geo.inner(phi_identity_residual(geo, phi, x, y, z), mat_vec(phi, w)));
}

CheckReport check_phi_curvature(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                Execution exec) {
  const CheckSpec spec{"curvature.phi_identity",
                       "R(X,Y) phi Z = g(phi Y,Z)X - g(phi X,Z)Y + g(Y,Z) phi X - g(X,Z) phi Y + phi R(X,Y)Z",
                       tol,
                       {"phi1", "phi2", "phi3"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        const PointGeometry geo(t.g(), p);
        const PhiValues pv = phi_values(t, p);
        const std::vector<Vec> vs = unit_test_vectors(geo, dirs);
        const std::size_t m = vs.size();
        ResidualTracker tr(3);
        for (std::size_t i = 0; i < m; ++i) {
          const Vec& x = vs[i];
          const Vec& y = vs[(i + 1) % m];
          const Vec& z = vs[(i + 2) % m];
          for (std::size_t a = 0; a < 3; ++a) tr.update(a, geo.norm(phi_identity_residual(geo, pv.phi[a], x, y, z)), x);
        }
        return tr.take();
      },
      exec);
}

EinsteinFit einstein_fit(const MetricField& g, const std::vector<Point>& points, Execution exec) {
  if (points.size() < 5) throw UsageError("einstein_fit needs at least five points");
  struct Pair {
    Vec ric, g;
  };
  const std::vector<Pair> data = map_indices<Pair>(
      points.size(),
      [&](std::size_t i) {
        const PointGeometry geo(g, points[i]);
        Vec gv(static_cast<std::size_t>(geo.dim() * geo.dim()));
        for (int a = 0; a < geo.dim(); ++a) {
          for (int b = 0; b < geo.dim(); ++b) gv[static_cast<std::size_t>(a * geo.dim() + b)] = geo.metric(a, b);
        }
        return Pair{geo.ricci_frame_sum(), std::move(gv)};
      },
      exec);
  double num = 0.0, den = 0.0;
  for (const Pair& d : data) {
    num += dot(d.ric, d.g);
    den += dot(d.g, d.g);
  }
  EinsteinFit fit;
  fit.lambda = num / den;
  fit.residual = -1.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double r = frobenius(axpy(data[i].ric, -fit.lambda, data[i].g)) / frobenius(data[i].g);
    if (std::isnan(r)) r = std::numeric_limits<double>::infinity();
    if (r > fit.residual) {
      fit.residual = r;
      fit.worst_index = i;
    }
  }
  return fit;
}

CheckReport check_einstein(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol, Execution exec) {
  const EinsteinFit fit = einstein_fit(t.g(), samples.points, exec);
  CheckReport r;
  r.id = "thm.einstein";
  r.anchor = "Ric = lambda g";
  r.tolerance = tol;
  r.max_residual = fit.residual;
  r.parts = {{"ric_minus_lambda_g", fit.residual}};
  r.worst_point = samples.points[fit.worst_index].coords;
  r.points = samples.points.size();
  r.vectors = samples.vectors_per_point();
  r.seed = samples.seed;
  std::ostringstream os;
  os.precision(17);
  os << "lambda = " << fit.lambda << "; dimension " << t.dim();
  r.note = os.str();
  r.decide();
  return r;
}

double ricci_parallel_defect(const MetricField& g, const Point& p, std::span<const double> direction) {
  const int n = g.dim();
  if (static_cast<int>(direction.size()) != n) throw UsageError("direction has the wrong number of components");
  g.chart().require(p);
  const double len = std::sqrt(dot(direction, direction));
  if (len == 0.0) return 0.0;
  Vec u(direction.begin(), direction.end());
  for (double& c : u) c /= len;

  auto shifted = [&](double s) {
    Vec x = p.coords;
    for (int a = 0; a < n; ++a) x[static_cast<std::size_t>(a)] += s * u[static_cast<std::size_t>(a)];
    return Point(std::move(x));
  };
  double h = 1e-3;
  while (!(g.chart().contains(shifted(h).coords) && g.chart().contains(shifted(-h).coords))) {
    h *= 0.5;
    if (h < 1e-8) throw DomainError("finite-difference step underflow near the chart boundary");
  }
  auto central = [&](double step) {
    const Vec plus = PointGeometry(g, shifted(step)).ricci();
    const Vec minus = PointGeometry(g, shifted(-step)).ricci();
    Vec d(plus.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (plus[i] - minus[i]) / (2.0 * step);
    return d;
  };
  const Vec d0 = central(h);
  const Vec d1 = central(h / 2.0);
  const Vec d2 = central(h / 4.0);
  Vec du(d0.size());
  for (std::size_t i = 0; i < du.size(); ++i) {
    const double r0 = (4.0 * d1[i] - d0[i]) / 3.0;
    const double r1 = (4.0 * d2[i] - d1[i]) / 3.0;
    du[i] = (16.0 * r1 - r0) / 15.0;
  }

  const PointGeometry geo(g, p);
  const Vec ric = geo.ricci();
  Vec corr(du.size(), 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (int c = 0; c < n; ++c) {
        const double uc = u[static_cast<std::size_t>(c)];
        if (uc == 0.0) continue;
        for (int d = 0; d < n; ++d) {
          acc -= uc * (geo.christoffel(d, c, a) * ric[static_cast<std::size_t>(d * n + b)] +
                       geo.christoffel(d, c, b) * ric[static_cast<std::size_t>(a * n + d)]);
        }
      }
      corr[static_cast<std::size_t>(a * n + b)] = acc;
    }
  }
  const double defect = frobenius(axpy(du, 1.0, corr));
  if (defect == 0.0) return 0.0;
  return defect / (frobenius(du) + frobenius(corr));
}

CheckReport check_ricci_parallel(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                 Execution exec) {
  const CheckSpec spec{"thm.ricci_parallel", "nabla Ric = 0", tol, {"relative_defect"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        ResidualTracker tr(1);
        for (const Vec& d : dirs) tr.update(0, ricci_parallel_defect(t.g(), p, d), d);
        return tr.take();
      },
      exec);
}

Vec second_fundamental_form(const ThreeKenmotsuStructure& t, const HVector& x, const HVector& y) {
  const Point& p = x.base;
  if (y.base.coords != p.coords) throw UsageError("second fundamental form arguments live at different points");
  const PointGeometry geo(t.g(), p);
  const std::vector<Jet2> xi = t.xi().jet_eval(p);
  const std::vector<Jet2> eta = t.eta().jet_eval(p);
  const Vec eta_v = values_of(eta);
  for (const HVector* v : {&x, &y}) {
    if (std::abs(dot(eta_v, v->v)) >= 1e-12 * std::max(geo.norm(v->v), 1e-300)) {
      throw DomainError("second fundamental form argument is not in H");
    }
  }
  return second_fundamental_at(geo, xi, eta, x.v, y.v);
}

CheckReport check_second_fundamental_form(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                          Execution exec) {
  const CheckSpec spec{"gauss.h_form", "h(X,Y) = -g(X,Y) xi on H", tol, {"h_plus_g_xi"}};
  std::vector<double> plus_sign(samples.points.size(), 0.0);
  CheckReport r = run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        const PointGeometry geo(t.g(), p);
        const std::vector<Jet2> xi = t.xi().jet_eval(p);
        const std::vector<Jet2> eta = t.eta().jet_eval(p);
        const Vec xi_v = values_of(xi);
        const std::vector<Vec> hs = unit_h_vectors(geo, xi_v, values_of(eta), dirs, true);
        const std::size_t m = hs.size();
        ResidualTracker tr(1);
        double alt = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t k : {i, (i + 1) % m}) {
            const Vec h = second_fundamental_at(geo, xi, eta, hs[i], hs[k]);
            const double gxy = geo.inner(hs[i], hs[k]);
            tr.update(0, geo.norm(axpy(h, gxy, xi_v)), hs[i]);
            alt = std::max(alt, geo.norm(axpy(h, -gxy, xi_v)));
          }
        }
        // Index of p in the sample is recovered from its address.
        plus_sign[static_cast<std::size_t>(&p - samples.points.data())] = alt;
        return tr.take();
      },
      exec);
  double alt = 0.0;
  for (double a : plus_sign) alt = std::max(alt, a);
  std::ostringstream os;
  os << "residual of h(X,Y) - g(X,Y) xi (positive sign): " << alt;
  r.note = os.str();
  return r;
}

CheckReport check_gauss_relations(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                  Execution exec) {
  if (!t.warped_source()) throw UnsupportedError("Gauss relations need a structure built by warped_product");
  const WarpedProductSpec& src = *t.warped_source();
  const int n = t.dim();
  const double four_n = 4.0 * t.n();
  const CheckSpec spec{"gauss.relations",
                       "R(X,Y,Z,W) = Rbar(X,Y,Z,W) - g(X,W)g(Y,Z) + g(X,Z)g(Y,W); Ricbar(X,Y) = Ric(X,Y) + 4n g(X,Y)",
                       tol,
                       {"curvature", "ric"}};
  CheckReport r = run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        const PointGeometry geo(t.g(), p);
        const double t0 = p.coords[0];
        const double factor = src.c * src.c * std::exp(2.0 * t0);
        const MetricField leaf(scale(factor, src.base.metric.field()));
        const Point y(Vec(p.coords.begin() + 1, p.coords.end()));
        const PointGeometry leaf_geo(leaf, y);
        const Vec xi = t.xi().eval(p);
        const Vec eta = t.eta().eval(p);
        const std::vector<Vec> frame = unit_h_vectors(geo, xi, eta, {}, true);
        const std::vector<Vec> random = unit_h_vectors(geo, xi, eta, dirs, false);
        auto leaf_of = [](const Vec& v) { return Vec(v.begin() + 1, v.end()); };
        ResidualTracker tr(2);
        auto curv = [&](const Vec& x, const Vec& yv, const Vec& z, const Vec& w) {
          const double amb = geo.riemann_4(x, yv, z, w);
          const double bar = leaf_geo.riemann_4(leaf_of(x), leaf_of(yv), leaf_of(z), leaf_of(w));
          const double rhs = bar - geo.inner(x, w) * geo.inner(yv, z) + geo.inner(x, z) * geo.inner(yv, w);
          tr.update(0, amb - rhs, x);
        };
        for (const Vec& a : frame)
          for (const Vec& b : frame)
            for (const Vec& c : frame)
              for (const Vec& d : frame) curv(a, b, c, d);
        const std::size_t m = random.size();
        for (std::size_t i = 0; i < m; ++i) curv(random[i], random[(i + 1) % m], random[(i + 2) % m], random[(i + 3) % m]);

        const Vec ric = geo.ricci();
        const Vec ric_bar = leaf_geo.ricci();
        const int nb = n - 1;
        std::vector<Vec> all = frame;
        all.insert(all.end(), random.begin(), random.end());
        for (const Vec& x : all) {
          for (const Vec& yv : all) {
            double amb = 0.0, bar = 0.0;
            for (int a = 0; a < n; ++a) {
              for (int b = 0; b < n; ++b) {
                amb += ric[static_cast<std::size_t>(a * n + b)] * x[static_cast<std::size_t>(a)] * yv[static_cast<std::size_t>(b)];
              }
            }
            for (int a = 0; a < nb; ++a) {
              for (int b = 0; b < nb; ++b) {
                bar += ric_bar[static_cast<std::size_t>(a * nb + b)] * x[static_cast<std::size_t>(a + 1)] *
                       yv[static_cast<std::size_t>(b + 1)];
              }
            }
            tr.update(1, bar - amb - four_n * geo.inner(x, yv), x);
          }
        }
        return tr.take();
      },
      exec);
  if (!src.flat_base) r.note = "unverified base";
  return r;
}

QuaternionicVolume quaternionic_volume(const ThreeKenmotsuStructure& t, const Point& p) {
  const int n = t.dim();
  const PointGeometry geo(t.g(), p);
  QuaternionicVolume out;
  out.omega4 = KForm(n, 4);
  for (int a = 1; a <= 3; ++a) {
    const KForm om = two_form_from(t.g(), t.phi(a)).eval(p);
    out.omega4 = out.omega4 + wedge(om, om);
  }
  KForm power = out.omega4;
  for (int k = 1; k < t.n(); ++k) power = wedge(power, out.omega4);
  KForm eta(n, 1);
  const Vec eta_v = t.eta().eval(p);
  for (int i = 0; i < n; ++i) eta.at_mask(IndexMask{1} << i) = eta_v[static_cast<std::size_t>(i)];
  out.volume_form = wedge(power, eta);
  out.vol = out.volume_form.components().at(0);
  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale /= std::sqrt(geo.metric(i, i));
  out.normalised = out.vol * scale;
  out.degenerate = !(std::abs(out.normalised) >= 1e-12);
  return out;
}

CheckReport check_volume(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol, Execution exec) {
  const CheckSpec spec{"volume.nondegenerate", "Vol = Omega^n ^ eta is nowhere zero with constant sign", tol,
                       {"zero_or_sign_flip"}};
  const QuaternionicVolume first = quaternionic_volume(t, samples.points.front());
  const double ref_sign = first.normalised >= 0.0 ? 1.0 : -1.0;
  std::vector<double> magnitude(samples.points.size(), 0.0);
  CheckReport r = run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>&) {
        const QuaternionicVolume q = quaternionic_volume(t, p);
        magnitude[static_cast<std::size_t>(&p - samples.points.data())] = std::abs(q.normalised);
        ResidualTracker tr(1);
        const bool bad = q.degenerate || q.normalised * ref_sign <= 0.0;
        tr.update(0, bad ? 1.0 : 0.0);
        return tr.take();
      },
      exec);
  double smallest = std::numeric_limits<double>::infinity();
  for (double m : magnitude) smallest = std::min(smallest, m);
  std::ostringstream os;
  os << "min |Vol| on g-normalised coordinate frame: " << smallest << "; degree " << first.volume_form.degree();
  r.note = os.str();
  return r;
}

CheckReport check_compose_round_trip(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                     Execution exec) {
  const CheckSpec spec{"thm.compose_third", "phi3 := phi1 o phi2 reproduces phi3 and is Kenmotsu", tol,
                       {"phi3_match", "kenmotsu_phi3"}};
  try {
    const ThreeKenmotsuStructure composed =
        compose_third(t.phi(1), t.phi(2), t.eta(), t.xi(), t.g(), samples, 1e-10);
    const CheckSpec match_spec{"phi3_match", "", tol, {"phi3_match"}};
    const CheckReport match = run_check(
        match_spec, samples,
        [&](const Point& p, const std::vector<Vec>& dirs) {
          const PointGeometry geo(t.g(), p);
          const Vec a = composed.phi(3).eval(p);
          const Vec b = t.phi(3).eval(p);
          ResidualTracker tr(1);
          for (const Vec& v : unit_test_vectors(geo, dirs)) tr.update(0, geo.norm(axpy(mat_vec(a, v), -1.0, mat_vec(b, v))), v);
          return tr.take();
        },
        exec);
    const CheckReport kenmotsu = check_kenmotsu(composed.structure(3), samples, tol, exec);
    return merge_reports(spec, {match, kenmotsu});
  } catch (const PreconditionError& e) {
    CheckReport r;
    r.id = spec.id;
    r.anchor = spec.anchor;
    r.tolerance = tol;
    r.max_residual = e.residual();
    r.parts = {{"anticommute_precondition", e.residual()}};
    r.points = samples.points.size();
    r.vectors = samples.vectors_per_point();
    r.seed = samples.seed;
    r.note = e.what();
    r.decide();
    return r;
  }
}

}  // namespace klab
