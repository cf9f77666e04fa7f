#include "klab/contact.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "klab/errors.hpp"

namespace klab {

AlmostContactMetricStructure::AlmostContactMetricStructure(TensorField phi, TensorField xi, TensorField eta,
                                                           MetricField g)
    : phi_(std::move(phi)), xi_(std::move(xi)), eta_(std::move(eta)), g_(std::move(g)) {
  if (!phi_.valid() || !xi_.valid() || !eta_.valid()) throw StructuralError("structure fields must be set");
  if (phi_.variance() != kEndomorphism) throw StructuralError("phi must be a (1,1) field");
  if (xi_.variance() != kVector) throw StructuralError("xi must be a vector field");
  if (eta_.variance() != kCovector) throw StructuralError("eta must be a (0,1) field");
  const int n = g_.dim();
  if (phi_.dim() != n || xi_.dim() != n || eta_.dim() != n) {
    throw StructuralError("structure fields live on charts of different dimension");
  }
  if (n % 2 != 1) throw StructuralError("an almost contact structure needs an odd-dimensional chart");
}

StructureAt::StructureAt(const AlmostContactMetricStructure& s, const Point& p)
    : geo(s.g(), p), xi(s.xi().eval(p)), eta(s.eta().eval(p)), phi_jets(s.phi().jet_eval(p)) {
  phi.reserve(phi_jets.size());
  for (const Jet2& j : phi_jets) phi.push_back(j.value());
}

Vec StructureAt::apply_phi(std::span<const double> v) const {
  const int n = geo.dim();
  Vec out(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int b = 0; b < n; ++b) acc += phi[static_cast<std::size_t>(a * n + b)] * v[static_cast<std::size_t>(b)];
    out[static_cast<std::size_t>(a)] = acc;
  }
  return out;
}

double StructureAt::eta_of(std::span<const double> v) const {
  double acc = 0.0;
  for (std::size_t a = 0; a < eta.size(); ++a) acc += eta[a] * v[a];
  return acc;
}

Vec StructureAt::nabla_phi(std::span<const double> x) const { return geo.covariant(phi_jets, kEndomorphism, x); }

Vec StructureAt::kenmotsu_defect(std::span<const double> x, std::span<const double> y) const {
  const int n = geo.dim();
  const Vec dphi = nabla_phi(x);
  const Vec phix = apply_phi(x);
  const double g_phix_y = geo.inner(phix, y);
  const double eta_y = eta_of(y);
  Vec out(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int b = 0; b < n; ++b) acc += dphi[static_cast<std::size_t>(a * n + b)] * y[static_cast<std::size_t>(b)];
    out[static_cast<std::size_t>(a)] =
        acc - g_phix_y * xi[static_cast<std::size_t>(a)] + eta_y * phix[static_cast<std::size_t>(a)];
  }
  return out;
}

std::vector<Vec> unit_test_vectors(const PointGeometry& geo, const std::vector<Vec>& directions) {
  const int n = geo.dim();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n) + directions.size());
  auto push_unit = [&](Vec v) {
    const double nv = geo.norm(v);
    if (nv < 1e-300) return;
    for (double& c : v) c /= nv;
    out.push_back(std::move(v));
  };
  for (int i = 0; i < n; ++i) {
    Vec e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    push_unit(std::move(e));
  }
  for (const Vec& d : directions) push_unit(d);
  return out;
}

namespace {

Vec combine(const Vec& a, double ca, const Vec& b, double cb) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ca * a[i] + cb * b[i];
  return out;
}

// max over strictly increasing index sets of |c_I| / prod |d_i|_g: the form
// evaluated on g-normalised coordinate vectors.
double normalised_max(const KForm& f, const PointGeometry& geo) {
  const int n = geo.dim();
  Vec inv_len(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) inv_len[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(geo.metric(i, i));
  double worst = 0.0;
  const std::vector<IndexMask> masks = masks_of_degree(f.dim(), f.degree());
  for (std::size_t r = 0; r < masks.size(); ++r) {
    double w = std::abs(f.components()[r]);
    for (IndexMask m = masks[r]; m != 0; m &= m - 1) w *= inv_len[static_cast<std::size_t>(std::countr_zero(m))];
    worst = std::max(worst, std::isnan(w) ? INFINITY : w);
  }
  return worst;
}

KForm one_form_value(const Vec& eta) {
  KForm f(static_cast<int>(eta.size()), 1);
  for (std::size_t i = 0; i < eta.size(); ++i) f.at_mask(IndexMask{1} << i) = eta[i];
  return f;
}

}  // namespace

CheckReport check_almost_contact(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                                 Execution exec) {
  const CheckSpec spec{"contact.axioms",
                       "phi^2 X = -X + eta(X) xi, eta(xi) = 1, eta(phi X) = 0, phi xi = 0, "
                       "g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)",
                       tol,
                       {"phi_squared", "eta_xi", "eta_phi", "phi_xi", "compatible"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        const StructureAt at(s, p);
        const std::vector<Vec> vs = unit_test_vectors(at.geo, dirs);
        ResidualTracker t(spec.parts.size());
        t.update(1, at.eta_of(at.xi) - 1.0, at.xi);
        t.update(3, at.geo.norm(at.apply_phi(at.xi)), at.xi);
        std::vector<Vec> phis;
        phis.reserve(vs.size());
        for (const Vec& v : vs) {
          const Vec pv = at.apply_phi(v);
          const Vec ppv = at.apply_phi(pv);
          const double ev = at.eta_of(v);
          Vec r(v.size());
          for (std::size_t a = 0; a < v.size(); ++a) r[a] = ppv[a] + v[a] - ev * at.xi[a];
          t.update(0, at.geo.norm(r), v);
          t.update(2, at.eta_of(pv), v);
          phis.push_back(pv);
        }
        for (std::size_t i = 0; i < vs.size(); ++i) {
          for (std::size_t j = 0; j < vs.size(); ++j) {
            const double lhs = at.geo.inner(phis[i], phis[j]);
            const double rhs = at.geo.inner(vs[i], vs[j]) - at.eta_of(vs[i]) * at.eta_of(vs[j]);
            t.update(4, lhs - rhs, vs[i]);
          }
        }
        return t.take();
      },
      exec);
}

Vec kenmotsu_defect(const AlmostContactMetricStructure& s, const TensorField& x, const TensorField& y,
                    const Point& p) {
  if (x.variance() != kVector || y.variance() != kVector) throw UnsupportedError("kenmotsu_defect expects vector fields");
  const StructureAt at(s, p);
  return at.kenmotsu_defect(x.eval(p), y.eval(p));
}

CheckReport check_kenmotsu(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                           Execution exec) {
  const CheckSpec spec{"kenmotsu.eq1", "(nabla_X phi)Y = g(phi X, Y) xi - eta(Y) phi X", tol, {"defect"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        const StructureAt at(s, p);
        const std::vector<Vec> vs = unit_test_vectors(at.geo, dirs);
        const int n = at.geo.dim();
        ResidualTracker t(1);
        for (const Vec& x : vs) {
          const Vec dphi = at.nabla_phi(x);
          const Vec phix = at.apply_phi(x);
          for (const Vec& y : vs) {
            const double g_phix_y = at.geo.inner(phix, y);
            const double eta_y = at.eta_of(y);
            Vec d(static_cast<std::size_t>(n), 0.0);
            for (int a = 0; a < n; ++a) {
              double acc = 0.0;
              for (int b = 0; b < n; ++b) acc += dphi[static_cast<std::size_t>(a * n + b)] * y[static_cast<std::size_t>(b)];
              d[static_cast<std::size_t>(a)] =
                  acc - g_phix_y * at.xi[static_cast<std::size_t>(a)] + eta_y * phix[static_cast<std::size_t>(a)];
            }
            t.update(0, at.geo.norm(d), x);
          }
        }
        return t.take();
      },
      exec);
}

CheckReport check_reeb_identities(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                                  Execution exec) {
  const CheckSpec spec{"kenmotsu.eq2", "nabla_X xi = X - eta(X) xi, (nabla_X eta)Y = g(X,Y) - eta(X) eta(Y)", tol,
                       {"nabla_xi", "nabla_eta"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>& dirs) {
        const PointGeometry geo(s.g(), p);
        const std::vector<Jet2> xi_j = s.xi().jet_eval(p);
        const std::vector<Jet2> eta_j = s.eta().jet_eval(p);
        Vec xi, eta;
        for (const Jet2& j : xi_j) xi.push_back(j.value());
        for (const Jet2& j : eta_j) eta.push_back(j.value());
        auto eta_of = [&](const Vec& v) {
          double acc = 0.0;
          for (std::size_t a = 0; a < v.size(); ++a) acc += eta[a] * v[a];
          return acc;
        };
        const std::vector<Vec> vs = unit_test_vectors(geo, dirs);
        ResidualTracker t(spec.parts.size());
        for (const Vec& x : vs) {
          const Vec nxi = geo.covariant(xi_j, kVector, x);
          const double ex = eta_of(x);
          t.update(0, geo.norm(combine(nxi, 1.0, combine(x, 1.0, xi, -ex), -1.0)), x);
          const Vec neta = geo.covariant(eta_j, kCovector, x);
          for (const Vec& y : vs) {
            double lhs = 0.0;
            for (std::size_t a = 0; a < y.size(); ++a) lhs += neta[a] * y[a];
            t.update(1, lhs - geo.inner(x, y) + ex * eta_of(y), x);
          }
        }
        return t.take();
      },
      exec);
}

KFormField kahler_form(const AlmostContactMetricStructure& s) { return two_form_from(s.g(), s.phi()); }

CheckReport check_form_identities(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                                  Execution exec) {
  const CheckSpec spec{"forms.identities", "d eta = 0, d Omega = 2 eta ^ Omega (shuffle-sum wedge)", tol,
                       {"d_eta", "d_omega"}};
  const KFormField eta_form = one_form(s.eta());
  const KFormField omega = kahler_form(s);
  CheckReport r = run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>&) {
        const PointGeometry geo(s.g(), p);
        ResidualTracker t(spec.parts.size());
        t.update(0, normalised_max(exterior_derivative(eta_form, p), geo));
        const KForm d_omega = exterior_derivative(omega, p);
        const KForm eta_omega = wedge(one_form_value(s.eta().eval(p)), omega.eval(p));
        t.update(1, normalised_max(d_omega - 2.0 * eta_omega, geo));
        return t.take();
      },
      exec);
  const std::vector<double> alt = map_indices<double>(
      samples.points.size(),
      [&](std::size_t i) {
        const Point& p = samples.points[i];
        const PointGeometry geo(s.g(), p);
        const KForm eta_omega = wedge(one_form_value(s.eta().eval(p)), omega.eval(p));
        return normalised_max(exterior_derivative(omega, p) - eta_omega, geo);
      },
      exec);
  double unit_factor = 0.0;
  for (double a : alt) unit_factor = std::max(unit_factor, a);
  std::ostringstream os;
  os << "residual of d Omega - eta ^ Omega (unit factor): " << unit_factor;
  r.note = os.str();
  return r;
}

}  // namespace klab
