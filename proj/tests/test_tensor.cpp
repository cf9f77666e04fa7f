#include <doctest.h>

#include <cmath>

#include "fd_oracle.hpp"
#include "fixtures.hpp"
#include "klab/errors.hpp"
#include "klab/geometry.hpp"
#include "klab/sampling.hpp"
#include "klab/suite.hpp"
#include "oracles.hpp"

using namespace klab;
using fixture::frame_field;
using fixture::frame_vector;
using fixture::max_abs;
using fixture::max_abs_diff;

namespace {

std::size_t k3(int k, int i, int j, int n = 5) { return static_cast<std::size_t>((k * n + i) * n + j); }

std::vector<ThreeKenmotsuStructure> all_builtins() {
  std::vector<ThreeKenmotsuStructure> out;
  for (const std::string& n : builtin_manifold_names()) out.push_back(build_manifold(builtin_manifold(n)));
  return out;
}

// Christoffel symbols from finite differences of plain metric values.
Vec fd_christoffel(const MetricField& g, const Point& p) {
  const int n = g.dim();
  const Vec gv = g.eval(p);
  std::vector<Vec> dg(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    dg[static_cast<std::size_t>(m)].resize(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n * n; ++i) {
      fd::Fn f = [&, i](const std::vector<double>& x) { return g.eval(Point(x))[static_cast<std::size_t>(i)]; };
      dg[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] = fd::first(f, p.coords, m);
    }
  }
  // g^-1 by Gauss-Jordan
  std::vector<double> a(gv), inv(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1.0;
  for (int c = 0; c < n; ++c) {
    const double piv = a[static_cast<std::size_t>(c * n + c)];
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(c * n + j)] /= piv;
      inv[static_cast<std::size_t>(c * n + j)] /= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[static_cast<std::size_t>(r * n + c)];
      for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(r * n + j)] -= f * a[static_cast<std::size_t>(c * n + j)];
        inv[static_cast<std::size_t>(r * n + j)] -= f * inv[static_cast<std::size_t>(c * n + j)];
      }
    }
  }
  auto d = [&](int m, int i, int j) { return dg[static_cast<std::size_t>(m)][static_cast<std::size_t>(i * n + j)]; };
  Vec out(static_cast<std::size_t>(n * n * n), 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += 0.5 * inv[static_cast<std::size_t>(k * n + l)] * (d(i, l, j) + d(j, i, l) - d(l, i, j));
        out[k3(k, i, j, n)] = s;
      }
  return out;
}

}  // namespace

TEST_CASE("christoffel of the flat metric vanishes") {
  const ThreeKenmotsuStructure f = flat_control();
  CHECK(max_abs(christoffel(f.g(), Point{0.3, -1, 2, 0.5, 1})) == 0.0);
}

TEST_CASE("christoffel of the example at (1,0,0,0,0)") {
  const ThreeKenmotsuStructure s = example_r5();
  const Vec g = christoffel(s.g(), Point{1, 0, 0, 0, 0});
  CHECK(g[k3(0, 0, 0)] == doctest::Approx(-1.0));
  CHECK(g[k3(0, 1, 1)] == doctest::Approx(1.0));
  CHECK(g[k3(1, 0, 1)] == doctest::Approx(-1.0));
  CHECK(g[k3(1, 2, 3)] == 0.0);
}

TEST_CASE("christoffel matches the conformal closed form and finite differences") {
  for (const ChartComponent comp : {ChartComponent::positive, ChartComponent::negative}) {
    const ThreeKenmotsuStructure s = example_r5(comp);
    const SampleSet smp = sample(s.chart(), 30, 0, 1);
    for (const Point& p : smp.points) {
      const Vec g = christoffel(s.g(), p);
      CHECK(max_abs_diff(g, oracle::conformal_christoffel(p.coords)) < 1e-12 * max_abs(g) + 1e-14);
      const Vec f = fd_christoffel(s.g(), p);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(fd::close(g[i], f[i]));
      for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j) CHECK(g[k3(k, i, j)] == g[k3(k, j, i)]);
    }
  }
}

TEST_CASE("christoffel of dt^2 + e^2t delta") {
  const ThreeKenmotsuStructure w = warped_product(flat_warped_spec(1, 1.0));
  const SampleSet smp = sample(w.chart(), 10, 0, 2);
  for (const Point& p : smp.points) {
    const Vec g = christoffel(w.g(), p);
    const double e2t = std::exp(2 * p.coords[0]);
    for (int i = 1; i < 5; ++i) {
      CHECK(g[k3(0, i, i)] == doctest::Approx(-e2t).epsilon(1e-13));
      CHECK(g[k3(i, 0, i)] == doctest::Approx(1.0).epsilon(1e-13));
    }
    const Vec f = fd_christoffel(w.g(), p);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(fd::close(g[i], f[i]));
  }
}

TEST_CASE("singular metric is a degeneracy error") {
  const ChartPtr chart = euclidean_chart("R3", 3);
  const MetricField g(TensorField::make(chart, kBilinear, [](auto x, auto out) {
    out[0] = square(x[0]);
    out[4] = 1.0;
    out[8] = 1.0;
  }));
  CHECK_THROWS_AS(christoffel(g, Point{0, 1, 1}), DegeneracyError);
}

TEST_CASE("covariant derivatives on the example frame") {
  const ThreeKenmotsuStructure s = example_r5();
  const SampleSet smp = sample(s.chart(), 20, 0, 5);
  const TensorField x1 = frame_field(s.chart_ptr(), 1);
  for (const Point& p : smp.points) {
    CHECK(max_abs(covariant_derivative(s.g(), s.xi(), s.xi(), p)) < 1e-10);
    CHECK(max_abs_diff(covariant_derivative(s.g(), s.xi(), x1, p), frame_vector(p, 1)) < 1e-10);
    CHECK(max_abs_diff(covariant_derivative(s.g(), x1, x1, p), frame_vector(p, 0)) > 0.0);
    Vec minus_xi = frame_vector(p, 0);
    for (double& c : minus_xi) c = -c;
    CHECK(max_abs_diff(covariant_derivative(s.g(), x1, x1, p), minus_xi) < 1e-10);
  }
}

TEST_CASE("covariant derivative of an unsupported variance") {
  const ThreeKenmotsuStructure s = example_r5();
  const TensorField t3 = TensorField::make(s.chart_ptr(), Variance{0, 3}, [](auto x, auto out) { out[0] = x[0]; });
  CHECK_THROWS_AS(covariant_derivative(s.g(), t3, s.xi(), Point{1, 0, 0, 0, 0}), UnsupportedError);
}

TEST_CASE("metric is parallel on every builtin") {
  for (const ThreeKenmotsuStructure& s : all_builtins()) {
    const SampleSet smp = sample(s.chart(), 100, 1, 7);
    for (std::size_t i = 0; i < smp.points.size(); ++i) {
      const PointGeometry geo(s.g(), smp.points[i]);
      const Vec ng = geo.covariant(s.g().jet_eval(smp.points[i]), kBilinear, smp.vectors[i][0]);
      CHECK(max_abs(ng) < 1e-10 * std::max(1.0, max_abs(s.g().eval(smp.points[i]))));
    }
  }
}

TEST_CASE("levi-civita connection is torsion free") {
  for (const ThreeKenmotsuStructure& s : all_builtins()) {
    const int n = s.dim();
    const TensorField x = TensorField::make(s.chart_ptr(), kVector, [n](auto xs, auto out) {
      for (int a = 0; a < n; ++a) out[static_cast<std::size_t>(a)] = klab::sin(xs[static_cast<std::size_t>((a + 1) % n)]) + 0.5 * a;
    });
    const TensorField y = TensorField::make(s.chart_ptr(), kVector, [n](auto xs, auto out) {
      for (int a = 0; a < n; ++a) out[static_cast<std::size_t>(a)] = xs[static_cast<std::size_t>(a)] * xs[0] - 1.0;
    });
    const SampleSet smp = sample(s.chart(), 20, 0, 8);
    for (const Point& p : smp.points) {
      const Vec a = covariant_derivative(s.g(), y, x, p);
      const Vec b = covariant_derivative(s.g(), x, y, p);
      const Vec br = lie_bracket(x, y, p);
      double r = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i] - br[i]));
      CHECK(r < 1e-10 * std::max(1.0, max_abs(a)));
    }
  }
}

TEST_CASE("curvature table of the example") {
  const ThreeKenmotsuStructure s = example_r5();
  const Point p{0.7, 0.2, -1.0, 0.5, 1.5};
  const PointGeometry geo(s.g(), p);
  const Vec xi = frame_vector(p, 0), x1 = frame_vector(p, 1), x2 = frame_vector(p, 2);
  CHECK(max_abs_diff(geo.riemann_apply(x1, x2, x1), x2) < 1e-10);
  CHECK(max_abs(geo.riemann_apply(x1, x2, xi)) < 1e-10);
  Vec minus_xi = xi;
  for (double& c : minus_xi) c = -c;
  CHECK(max_abs_diff(geo.riemann_apply(xi, x1, x1), minus_xi) < 1e-10);
  CHECK(geo.riemann_4(x1, x2, x1, x2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(geo.riemann_4(x1, x1, x2, xi) == 0.0);
  CHECK(geo.riemann_4(xi, x1, x1, xi) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(riemann_4(s.g(), frame_field(s.chart_ptr(), 1), frame_field(s.chart_ptr(), 2), frame_field(s.chart_ptr(), 1),
                  frame_field(s.chart_ptr(), 2), p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_abs_diff(riemann_apply(s.g(), frame_field(s.chart_ptr(), 1), frame_field(s.chart_ptr(), 2),
                                   frame_field(s.chart_ptr(), 1), p),
                     x2) < 1e-10);
}

TEST_CASE("riemann symmetries and first bianchi on every builtin") {
  for (const ThreeKenmotsuStructure& s : all_builtins()) {
    const SampleSet smp = sample(s.chart(), 15, 4, 9);
    for (std::size_t i = 0; i < smp.points.size(); ++i) {
      const PointGeometry geo(s.g(), smp.points[i]);
      const auto& v = smp.vectors[i];
      const Vec &x = v[0], &y = v[1], &z = v[2], &w = v[3];
      const double r = geo.riemann_4(x, y, z, w);
      const double scale = std::max(1.0, std::abs(r)) * std::max(1.0, max_abs(s.g().eval(smp.points[i])));
      CHECK(std::abs(r + geo.riemann_4(y, x, z, w)) < 1e-9 * scale);
      CHECK(std::abs(r + geo.riemann_4(x, y, w, z)) < 1e-9 * scale);
      CHECK(std::abs(r - geo.riemann_4(z, w, x, y)) < 1e-9 * scale);
      const Vec b1 = geo.riemann_apply(x, y, z), b2 = geo.riemann_apply(y, z, x), b3 = geo.riemann_apply(z, x, y);
      Vec sum(b1.size());
      for (std::size_t a = 0; a < sum.size(); ++a) sum[a] = b1[a] + b2[a] + b3[a];
      CHECK(geo.norm(sum) < 1e-9 * scale);
    }
  }
}

TEST_CASE("ricci of the example against the frame-sum table oracle") {
  const ThreeKenmotsuStructure s = example_r5();
  const SampleSet smp = sample(s.chart(), 10, 0, 10);
  for (const Point& p : smp.points) {
    const Vec ric = ricci(s.g(), p);
    const PointGeometry geo(s.g(), p);
    auto ric_of = [&](const Vec& a, const Vec& b) {
      double r = 0.0;
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) r += ric[static_cast<std::size_t>(i * 5 + j)] * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
      return r;
    };
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b)
        CHECK(ric_of(frame_vector(p, a), frame_vector(p, b)) == doctest::Approx(oracle::table_ricci(a, b)).epsilon(1e-10));
    CHECK(ric_of(frame_vector(p, 1), frame_vector(p, 1)) == doctest::Approx(-4.0));
    CHECK(ric_of(frame_vector(p, 0), frame_vector(p, 0)) == doctest::Approx(-4.0));
    CHECK(std::abs(ric_of(frame_vector(p, 1), frame_vector(p, 2))) < 1e-10);
    CHECK(max_abs_diff(geo.ricci(), ric) < 1e-10 * max_abs(ric));
  }
}

TEST_CASE("frame-sum ricci equals contraction on every builtin") {
  for (const ThreeKenmotsuStructure& s : all_builtins()) {
    const SampleSet smp = sample(s.chart(), 10, 0, 12);
    for (const Point& p : smp.points) {
      const PointGeometry geo(s.g(), p);
      const Vec a = geo.ricci(), b = geo.ricci_frame_sum(), c = geo.ricci_frame_sum(s.xi().eval(p));
      CHECK(max_abs_diff(a, b) < 1e-10 * std::max(1.0, max_abs(a)));
      CHECK(max_abs_diff(a, c) < 1e-10 * std::max(1.0, max_abs(a)));
    }
  }
}

TEST_CASE("sectional curvature") {
  const ThreeKenmotsuStructure s = example_r5();
  const Point p{1.3, 0, 1, 0, -1};
  const PointGeometry geo(s.g(), p);
  const Vec xi = frame_vector(p, 0), x1 = frame_vector(p, 1), x2 = frame_vector(p, 2);
  CHECK(geo.sectional(x1, x2) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(geo.sectional(xi, x1) == doctest::Approx(-1.0).epsilon(1e-12));
  Vec a = x1, b = x2;
  for (double& c : a) c *= 2;
  for (double& c : b) c *= 3;
  CHECK(geo.sectional(a, b) == doctest::Approx(geo.sectional(x1, x2)).epsilon(1e-12));
  CHECK_THROWS_AS(geo.sectional(x1, a), DegeneracyError);
  CHECK(sectional(s.g(), frame_field(s.chart_ptr(), 1), frame_field(s.chart_ptr(), 2), p) == doctest::Approx(-1.0));
}

TEST_CASE("lie brackets on the example frame") {
  const ThreeKenmotsuStructure s = example_r5();
  const SampleSet smp = sample(s.chart(), 10, 0, 13);
  for (const Point& p : smp.points) {
    const TensorField x1 = frame_field(s.chart_ptr(), 1), x2 = frame_field(s.chart_ptr(), 2),
                      x4 = frame_field(s.chart_ptr(), 4);
    CHECK(max_abs(lie_bracket(x1, x2, p)) < 1e-14);
    Vec minus = frame_vector(p, 1);
    for (double& c : minus) c = -c;
    CHECK(max_abs_diff(lie_bracket(s.xi(), x1, p), minus) < 1e-14);
    minus = frame_vector(p, 4);
    for (double& c : minus) c = -c;
    CHECK(max_abs_diff(lie_bracket(s.xi(), x4, p), minus) < 1e-14);
    CHECK(max_abs(lie_bracket(x1, x1, p)) == 0.0);
  }
}
