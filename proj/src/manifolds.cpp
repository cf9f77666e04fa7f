#include "klab/manifolds.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "klab/errors.hpp"

namespace klab {

namespace {

template <class S>
using Elem = std::remove_const_t<typename std::remove_cvref_t<S>::element_type>;

std::size_t at(int n, int a, int b) { return static_cast<std::size_t>(a * n + b); }

// phi tables on a chart of dimension 1 + 4m, acting on coordinates 1.. in
// blocks of four and killing coordinate 0.
std::array<TensorField, 3> block_phis(const ChartPtr& chart) {
  const int n = chart->dim();
  const int m = (n - 1) / 4;
  const std::array<Vec, 3> tables = quaternion_tables();
  std::array<TensorField, 3> out;
  for (std::size_t a = 0; a < 3; ++a) {
    Vec c(static_cast<std::size_t>(n * n), 0.0);
    for (int blk = 0; blk < m; ++blk) {
      const int o = 1 + 4 * blk;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) c[at(n, o + i, o + j)] = tables[a][at(4, i, j)];
      }
    }
    out[a] = constant_field(chart, kEndomorphism, std::move(c));
  }
  return out;
}

TensorField unit_vector(const ChartPtr& chart, int index, Variance variance) {
  Vec c(static_cast<std::size_t>(chart->dim()), 0.0);
  c[static_cast<std::size_t>(index)] = 1.0;
  return constant_field(chart, variance, std::move(c));
}

ChartPtr example_chart(ChartComponent component) {
  const bool pos = component == ChartComponent::positive;
  Vec lower(5, -2.0), upper(5, 2.0);
  lower[0] = pos ? 0.1 : -2.0;
  upper[0] = pos ? 2.0 : -0.1;
  return std::make_shared<Chart>(
      pos ? "R5 x0>0" : "R5 x0<0", 5,
      [pos](std::span<const double> x) { return pos ? x[0] > 0.0 : x[0] < 0.0; }, lower, upper,
      [](std::span<const double> x) { return std::abs(x[0]) >= 0.1; });
}

ChartPtr interval_chart(std::string name, int dim, double t_min, double t_max) {
  Vec lower(static_cast<std::size_t>(dim), -2.0), upper(static_cast<std::size_t>(dim), 2.0);
  lower[0] = t_min;
  upper[0] = t_max;
  return std::make_shared<Chart>(
      std::move(name), dim, [t_min, t_max](std::span<const double> x) { return x[0] > t_min && x[0] < t_max; },
      lower, upper, [](std::span<const double> x) { return std::abs(x[0]) <= 3.0; });
}

double max_abs_diff(const Vec& a, const Vec& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

Vec matmul(const Vec& a, const Vec& b, int n) {
  Vec out(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) out[at(n, i, j)] += a[at(n, i, k)] * b[at(n, k, j)];
  return out;
}

}  // namespace

std::array<Vec, 3> quaternion_tables() {
  std::array<Vec, 3> t;
  for (Vec& v : t) v.assign(16, 0.0);
  // column b holds the image of e_{b+1}
  auto set = [&](int a, int from, int to, double sign) { t[static_cast<std::size_t>(a)][at(4, to, from)] = sign; };
  set(0, 0, 1, 1.0);
  set(0, 1, 0, -1.0);
  set(0, 2, 3, 1.0);
  set(0, 3, 2, -1.0);
  set(1, 0, 2, 1.0);
  set(1, 1, 3, -1.0);
  set(1, 2, 0, -1.0);
  set(1, 3, 1, 1.0);
  set(2, 0, 3, 1.0);
  set(2, 1, 2, 1.0);
  set(2, 2, 1, -1.0);
  set(2, 3, 0, -1.0);
  return t;
}

ThreeKenmotsuStructure example_r5(ChartComponent component) {
  const ChartPtr chart = example_chart(component);
  MetricField g(TensorField::make(chart, kBilinear, [](auto x, auto out) {
    const auto w = 1.0 / square(x[0]);
    for (int i = 0; i < 5; ++i) out[at(5, i, i)] = w;
  }));
  TensorField xi = TensorField::make(chart, kVector, [](auto x, auto out) { out[0] = -x[0]; });
  TensorField eta = TensorField::make(chart, kCovector, [](auto x, auto out) { out[0] = -1.0 / x[0]; });
  return ThreeKenmotsuStructure(block_phis(chart), std::move(xi), std::move(eta), std::move(g));
}

ThreeKenmotsuStructure example_r5_tchart(ChartComponent component) {
  const ThreeKenmotsuStructure raw = example_r5(component);
  const double sign = component == ChartComponent::positive ? 1.0 : -1.0;
  const ChartPtr chart = interval_chart("R5 t-chart", 5, -3.0, 3.0);
  // x0 = sign e^-t, dx0/dt = -x0; the other coordinates are unchanged.
  auto raw_coords = [sign](auto t) {
    using T = Elem<decltype(t)>;
    std::vector<T> x(t.begin(), t.end());
    x[0] = sign * exp(-t[0]);
    return x;
  };
  MetricField g(TensorField::make(chart, kBilinear, [raw, raw_coords](auto t, auto out) {
    using T = Elem<decltype(t)>;
    const std::vector<T> x = raw_coords(t);
    const std::vector<T> gr = raw.g().field().evaluate<T>(std::span<const T>(x));
    const T j0 = -x[0];
    for (int a = 0; a < 5; ++a) {
      for (int b = 0; b < 5; ++b) {
        T s = gr[at(5, a, b)];
        if (a == 0) s = s * j0;
        if (b == 0) s = s * j0;
        out[at(5, a, b)] = s;
      }
    }
  }));
  TensorField xi = TensorField::make(chart, kVector, [raw, raw_coords](auto t, auto out) {
    using T = Elem<decltype(t)>;
    const std::vector<T> x = raw_coords(t);
    const std::vector<T> v = raw.xi().evaluate<T>(std::span<const T>(x));
    out[0] = v[0] / (-x[0]);
    for (int a = 1; a < 5; ++a) out[static_cast<std::size_t>(a)] = v[static_cast<std::size_t>(a)];
  });
  TensorField eta = TensorField::make(chart, kCovector, [raw, raw_coords](auto t, auto out) {
    using T = Elem<decltype(t)>;
    const std::vector<T> x = raw_coords(t);
    const std::vector<T> w = raw.eta().evaluate<T>(std::span<const T>(x));
    out[0] = w[0] * (-x[0]);
    for (int a = 1; a < 5; ++a) out[static_cast<std::size_t>(a)] = w[static_cast<std::size_t>(a)];
  });
  std::array<TensorField, 3> phis;
  for (int alpha = 1; alpha <= 3; ++alpha) {
    phis[static_cast<std::size_t>(alpha - 1)] =
        TensorField::make(chart, kEndomorphism, [raw, raw_coords, alpha](auto t, auto out) {
          using T = Elem<decltype(t)>;
          const std::vector<T> x = raw_coords(t);
          const std::vector<T> f = raw.phi(alpha).evaluate<T>(std::span<const T>(x));
          const T j0 = -x[0];
          for (int a = 0; a < 5; ++a) {
            for (int b = 0; b < 5; ++b) {
              T s = f[at(5, a, b)];
              if (a == 0) s = s / j0;
              if (b == 0) s = s * j0;
              out[at(5, a, b)] = s;
            }
          }
        });
  }
  return ThreeKenmotsuStructure(std::move(phis), std::move(xi), std::move(eta), std::move(g));
}

QuaternionicBase flat_quaternion_base(int m) {
  if (m < 1) throw UsageError("flat_quaternion_base: m must be at least 1");
  const int n = 4 * m;
  const ChartPtr chart = euclidean_chart("R" + std::to_string(n), n);
  Vec delta(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) delta[at(n, i, i)] = 1.0;
  const std::array<Vec, 3> tables = quaternion_tables();
  QuaternionicBase base{MetricField(constant_field(chart, kBilinear, delta)), {}};
  for (std::size_t a = 0; a < 3; ++a) {
    Vec c(static_cast<std::size_t>(n * n), 0.0);
    for (int blk = 0; blk < m; ++blk) {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c[at(n, 4 * blk + i, 4 * blk + j)] = tables[a][at(4, i, j)];
    }
    base.j[a] = constant_field(chart, kEndomorphism, std::move(c));
  }
  return base;
}

WarpedProductSpec flat_warped_spec(int m, double c, double t_min, double t_max) {
  WarpedProductSpec s{flat_quaternion_base(m), c, t_min, t_max, true};
  return s;
}

void validate_spec(const WarpedProductSpec& spec) {
  auto fail = [](const std::string& what) { throw StructuralError("invalid warped-product spec: " + what); };
  if (!(spec.c > 0.0) || !std::isfinite(spec.c)) fail("warp constant c must be positive");
  if (!(spec.t_min < spec.t_max)) fail("interval must satisfy t_min < t_max");
  const int n = spec.base_dim();
  if (n < 4 || n % 4 != 0) fail("base dimension must be 4m with m >= 1");
  if (1 + n > kMaxDim) fail("base dimension exceeds the supported chart size");
  for (const TensorField& j : spec.base.j) {
    if (!j.valid() || j.variance() != kEndomorphism || j.dim() != n) fail("J_a must be (1,1) fields on the base");
  }
  const SampleSet probes = sample(spec.base.metric.chart(), 8, 0, 0);
  constexpr double kTol = 1e-10;
  for (const Point& p : probes.points) {
    const Vec g = spec.base.metric.eval(p);
    std::array<Vec, 3> j;
    for (std::size_t a = 0; a < 3; ++a) j[a] = spec.base.j[a].eval(p);
    Vec minus_id(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) minus_id[at(n, i, i)] = -1.0;
    for (std::size_t a = 0; a < 3; ++a) {
      if (max_abs_diff(matmul(j[a], j[a], n), minus_id) > kTol) fail("J_" + std::to_string(a + 1) + "^2 = -Id");
    }
    constexpr int kPerm[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (const auto& pm : kPerm) {
      if (max_abs_diff(matmul(j[pm[0]], j[pm[1]], n), j[pm[2]]) > kTol) {
        fail("J_" + std::to_string(pm[2] + 1) + " = J_" + std::to_string(pm[0] + 1) + " J_" +
             std::to_string(pm[1] + 1));
      }
    }
    // Hermitian: J^T g J = g
    for (std::size_t a = 0; a < 3; ++a) {
      Vec jt(static_cast<std::size_t>(n * n));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) jt[at(n, r, c)] = j[a][at(n, c, r)];
      if (max_abs_diff(matmul(jt, matmul(g, j[a], n), n), g) > kTol * std::max(1.0, *std::max_element(g.begin(), g.end()))) {
        fail("base metric Hermitian for J_" + std::to_string(a + 1));
      }
    }
  }
}

ThreeKenmotsuStructure warped_product(const WarpedProductSpec& spec) {
  validate_spec(spec);
  const int nb = spec.base_dim();
  const int n = nb + 1;
  const ChartPtr chart = interval_chart("warped R x R" + std::to_string(nb), n, spec.t_min, spec.t_max);
  const double c2 = spec.c * spec.c;
  const TensorField gb = spec.base.metric.field();
  MetricField g(TensorField::make(chart, kBilinear, [gb, c2, n, nb](auto x, auto out) {
    using T = Elem<decltype(x)>;
    const std::vector<T> base = gb.evaluate<T>(x.subspan(1));
    const T w = c2 * exp(2.0 * x[0]);
    out[0] = T(1.0);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) out[at(n, i + 1, j + 1)] = w * base[at(nb, i, j)];
  }));
  std::array<TensorField, 3> phis;
  for (std::size_t a = 0; a < 3; ++a) {
    const TensorField ja = spec.base.j[a];
    phis[a] = TensorField::make(chart, kEndomorphism, [ja, n, nb](auto x, auto out) {
      using T = Elem<decltype(x)>;
      const std::vector<T> jv = ja.evaluate<T>(x.subspan(1));
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) out[at(n, i + 1, j + 1)] = jv[at(nb, i, j)];
    });
  }
  return ThreeKenmotsuStructure(std::move(phis), unit_vector(chart, 0, kVector), unit_vector(chart, 0, kCovector),
                                std::move(g), spec);
}

ThreeKenmotsuStructure flat_control() {
  const ChartPtr chart = euclidean_chart("flat R5", 5);
  Vec delta(25, 0.0);
  for (int i = 0; i < 5; ++i) delta[at(5, i, i)] = 1.0;
  return ThreeKenmotsuStructure(block_phis(chart), unit_vector(chart, 0, kVector), unit_vector(chart, 0, kCovector),
                                MetricField(constant_field(chart, kBilinear, delta)));
}

ThreeKenmotsuStructure rate_control() {
  const ChartPtr chart = interval_chart("rate control", 5, -3.0, 3.0);
  MetricField g(TensorField::make(chart, kBilinear, [](auto x, auto out) {
    out[0] = 1.0;
    const auto e2 = exp(2.0 * x[0]);
    for (int i = 1; i < 4; ++i) out[at(5, i, i)] = e2;
    out[at(5, 4, 4)] = e2 * e2;
  }));
  return ThreeKenmotsuStructure(block_phis(chart), unit_vector(chart, 0, kVector), unit_vector(chart, 0, kCovector),
                                std::move(g));
}

namespace {

void require_adapted(const AlmostContactMetricStructure& s, const SampleSet& probes) {
  const int n = s.dim();
  for (const Point& p : probes.points) {
    Vec e0(static_cast<std::size_t>(n), 0.0);
    e0[0] = 1.0;
    const double r = max_abs_diff(s.xi().eval(p), e0);
    if (!(r <= 1e-12)) {
      std::ostringstream os;
      os << "chart is not adapted: |xi - d_0| = " << r << " at a probe point";
      throw NotAdaptedError(os.str());
    }
  }
}

// Jets of delta_i = d_i - eta_i d_0 (i >= 1) and of d_0.
std::vector<Jet2> frame_jets(const std::vector<Jet2>& eta, int i) {
  const std::size_t n = eta.size();
  std::vector<Jet2> v(n, Jet2(0.0));
  if (i == 0) {
    v[0] = Jet2(1.0);
    return v;
  }
  v[static_cast<std::size_t>(i)] = Jet2(1.0);
  v[0] = -eta[static_cast<std::size_t>(i)];
  return v;
}

Vec values(const std::vector<Jet2>& j) {
  Vec out;
  for (const Jet2& x : j) out.push_back(x.value());
  return out;
}

// G_ij = g(delta_i, delta_j) as jets, i, j = 1..n-1, laid out (n-1)^2.
std::vector<Jet2> block_metric(const std::vector<Jet2>& g, const std::vector<Jet2>& eta, int n) {
  const int m = n - 1;
  std::vector<Jet2> out(static_cast<std::size_t>(m * m));
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      const Jet2& ei = eta[static_cast<std::size_t>(i)];
      const Jet2& ej = eta[static_cast<std::size_t>(j)];
      out[at(m, i - 1, j - 1)] = g[at(n, i, j)] - ei * g[at(n, 0, j)] - ej * g[at(n, i, 0)] + ei * ej * g[at(n, 0, 0)];
    }
  }
  return out;
}

}  // namespace

AdaptedFrame adapted_frame(const AlmostContactMetricStructure& s, const SampleSet& probes) {
  require_adapted(s, probes);
  const int n = s.dim();
  AdaptedFrame f;
  f.d0 = unit_vector(s.chart_ptr(), 0, kVector);
  const TensorField eta = s.eta();
  for (int i = 1; i < n; ++i) {
    f.delta.push_back(TensorField::make(s.chart_ptr(), kVector, [eta, i](auto x, auto out) {
      using T = Elem<decltype(x)>;
      const std::vector<T> e = eta.evaluate<T>(x);
      out[static_cast<std::size_t>(i)] = T(1.0);
      out[0] = -e[static_cast<std::size_t>(i)];
    }));
  }
  for (const Point& p : probes.points) {
    const PointGeometry geo(s.g(), p);
    const Vec d0 = f.d0.eval(p);
    f.block_residual = std::max(f.block_residual, std::abs(geo.inner(d0, d0) - 1.0));
    for (int i = 0; i < n - 1; ++i) {
      const TensorField& di = f.delta[static_cast<std::size_t>(i)];
      const Vec dv = di.eval(p);
      f.block_residual = std::max(f.block_residual, std::abs(geo.inner(d0, dv)) / geo.norm(dv));
      for (double c : lie_bracket(f.d0, di, p)) f.bracket_residual = std::max(f.bracket_residual, std::abs(c));
      for (int j = i + 1; j < n - 1; ++j) {
        for (double c : lie_bracket(di, f.delta[static_cast<std::size_t>(j)], p)) {
          f.bracket_residual = std::max(f.bracket_residual, std::abs(c));
        }
      }
    }
  }
  return f;
}

CheckReport check_xig_lemma(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                            Execution exec) {
  require_adapted(s, samples);
  const int n = s.dim();
  const CheckSpec spec{"lemma.xig", "xi g_ij = 2 g_ij", tol, {"xi_g_minus_2g"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>&) {
        const std::vector<Jet2> G = block_metric(s.g().jet_eval(p), s.eta().jet_eval(p), n);
        const int m = n - 1;
        ResidualTracker tr(1);
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) {
            const Jet2& gij = G[at(m, i, j)];
            const double scale = std::sqrt(G[at(m, i, i)].value() * G[at(m, j, j)].value());
            Vec e(static_cast<std::size_t>(n), 0.0);
            e[static_cast<std::size_t>(i + 1)] = 1.0;
            tr.update(0, (gij.d(0) - 2.0 * gij.value()) / scale, e);
          }
        }
        return tr.take();
      },
      exec);
}

CheckReport check_lc_components(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                                Execution exec) {
  require_adapted(s, samples);
  const int n = s.dim();
  const int m = n - 1;
  const CheckSpec spec{"thm.lc_components",
                       "nabla_{delta_i} delta_j = Gt^k_ij delta_k - g_ij d_0; nabla_{d_0} delta_i = delta_i; "
                       "nabla_{d_0} d_0 = 0",
                       tol,
                       {"delta_delta", "d0_delta", "delta_d0", "d0_d0"}};
  return run_check(
      spec, samples,
      [&](const Point& p, const std::vector<Vec>&) {
        const PointGeometry geo(s.g(), p);
        const std::vector<Jet2> eta = s.eta().jet_eval(p);
        const std::vector<Jet2> G = block_metric(s.g().jet_eval(p), eta, n);
        // delta_i f = d_i f - eta_i d_0 f
        auto delta_d = [&](const Jet2& f, int i) { return f.d(i + 1) - eta[static_cast<std::size_t>(i + 1)].value() * f.d(0); };
        Eigen::MatrixXd gm(m, m);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) gm(i, j) = G[at(m, i, j)].value();
        const Eigen::MatrixXd ginv = gm.llt().solve(Eigen::MatrixXd::Identity(m, m));

        std::vector<std::vector<Jet2>> frame;
        std::vector<Vec> fv;
        for (int i = 0; i < n; ++i) {
          frame.push_back(frame_jets(eta, i));
          fv.push_back(values(frame.back()));
        }
        ResidualTracker tr(4);
        const Vec& d0 = fv[0];
        for (int i = 0; i < m; ++i) {
          const Vec& di = fv[static_cast<std::size_t>(i + 1)];
          const double ni = geo.norm(di);
          for (int j = 0; j < m; ++j) {
            const Vec& dj = fv[static_cast<std::size_t>(j + 1)];
            Vec expected(static_cast<std::size_t>(n), 0.0);
            for (int k = 0; k < m; ++k) {
              double gamma = 0.0;
              for (int l = 0; l < m; ++l) {
                gamma += 0.5 * ginv(k, l) *
                         (delta_d(G[at(m, l, j)], i) + delta_d(G[at(m, i, l)], j) - delta_d(G[at(m, i, j)], l));
              }
              const Vec& dk = fv[static_cast<std::size_t>(k + 1)];
              for (int a = 0; a < n; ++a) expected[static_cast<std::size_t>(a)] += gamma * dk[static_cast<std::size_t>(a)];
            }
            expected[0] -= G[at(m, i, j)].value();
            Vec got = geo.covariant(frame[static_cast<std::size_t>(j + 1)], kVector, di);
            for (int a = 0; a < n; ++a) got[static_cast<std::size_t>(a)] -= expected[static_cast<std::size_t>(a)];
            tr.update(0, geo.norm(got) / (ni * geo.norm(dj)), di);
          }
          Vec a = geo.covariant(frame[static_cast<std::size_t>(i + 1)], kVector, d0);
          Vec b = geo.covariant(frame[0], kVector, di);
          for (int c = 0; c < n; ++c) {
            a[static_cast<std::size_t>(c)] -= di[static_cast<std::size_t>(c)];
            b[static_cast<std::size_t>(c)] -= di[static_cast<std::size_t>(c)];
          }
          tr.update(1, geo.norm(a) / ni, di);
          tr.update(2, geo.norm(b) / ni, di);
        }
        tr.update(3, geo.norm(geo.covariant(frame[0], kVector, d0)), d0);
        return tr.take();
      },
      exec);
}

}  // namespace klab
