// One line per acceptance criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fd_oracle.hpp"
#include "fixtures.hpp"
#include "klab/errors.hpp"
#include "klab/manifolds.hpp"
#include "oracles.hpp"

using namespace klab;
using fixture::frame_field;
using fixture::frame_vector;
using fixture::max_abs_diff;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::vector<std::pair<std::string, ThreeKenmotsuStructure>> positive_models() {
  std::vector<std::pair<std::string, ThreeKenmotsuStructure>> out;
  out.emplace_back("example_r5", example_r5());
  for (double c : {0.5, 1.0, 2.0}) out.emplace_back("warped c=" + sci(c), warped_product(flat_warped_spec(1, c)));
  return out;
}

Outcome criterion1() {
  const ThreeKenmotsuStructure s = example_r5();
  const auto t0 = std::chrono::steady_clock::now();
  const SampleSet smp = sample(s.chart(), 200, 8, 0);
  double worst = 0.0;
  for (int a = 1; a <= 3; ++a) worst = std::max(worst, check_kenmotsu(s.structure(a), smp, 1e-10, Execution::serial).max_residual);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst < 1e-10 && secs < 5.0, "max defect " + sci(worst) + ", serial time " + sci(secs) + " s"};
}

Outcome criterion2() {
  double worst = 0.0;
  for (const auto& [name, t] : positive_models()) {
    worst = std::max(worst, check_h_sum(t, sample(t.chart(), 500, 1, 2), 1e-9).max_residual);
  }
  return {worst < 1e-9, "max |H1+H2+H3+3| " + sci(worst) + " over 4 models x 500 samples"};
}

Outcome criterion3() {
  const ThreeKenmotsuStructure s = example_r5();
  const SampleSet smp = sample(s.chart(), 20, 0, 3);
  double worst = 0.0;
  for (const Point& p : smp.points) {
    const PointGeometry geo(s.g(), p);
    std::vector<Vec> e;
    for (int i = 0; i < 5; ++i) e.push_back(frame_vector(p, i));
    // coordinate error / x0 is the error in frame components
    auto in_frame = [&](const Vec& coeffs) {
      Vec v(5, 0.0);
      for (int i = 0; i < 5; ++i)
        for (int a = 0; a < 5; ++a) v[static_cast<std::size_t>(a)] += coeffs[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
      return v;
    };
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j) {
        const std::size_t ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        for (int k = 1; k <= 4; ++k) {
          const Vec got = geo.riemann_apply(e[ui], e[uj], e[static_cast<std::size_t>(k)]);
          worst = std::max(worst, max_abs_diff(got, in_frame(oracle::table_R(i, j, k))) / p.coords[0]);
        }
        worst = std::max(worst, max_abs_diff(geo.riemann_apply(e[ui], e[uj], e[0]), Vec(5, 0.0)) / p.coords[0]);
        const Vec lhs = geo.riemann_apply(e[0], e[ui], e[uj]);
        const Vec nabla = geo.covariant(frame_field(s.chart_ptr(), j).jet_eval(p), kVector, e[ui]);
        worst = std::max(worst, max_abs_diff(lhs, nabla) / p.coords[0]);
        worst = std::max(worst, max_abs_diff(lhs, in_frame(oracle::table_R(0, i, j))) / p.coords[0]);
      }
  }
  return {worst < 1e-10, "max frame-component error " + sci(worst) + " at 20 points"};
}

Outcome criterion4() {
  const ThreeKenmotsuStructure s = example_r5();
  const EinsteinFit fit = einstein_fit(s.g(), sample(s.chart(), 100, 0, 4).points);
  const double expected = oracle::table_ricci(1, 1);
  const bool ok = std::abs(fit.lambda - expected) < 1e-8 && fit.residual < 1e-9;
  return {ok, "lambda " + sci(fit.lambda) + " (oracle " + sci(expected) + "), residual " + sci(fit.residual)};
}

Outcome criterion5() {
  const ThreeKenmotsuStructure s = example_r5();
  const SampleSet smp = sample(s.chart(), 50, 1, 5);
  double worst = 0.0;
  for (std::size_t i = 0; i < smp.points.size(); ++i)
    worst = std::max(worst, ricci_parallel_defect(s.g(), smp.points[i], smp.vectors[i][0]));
  return {worst < 1e-5, "max relative nabla Ric " + sci(worst)};
}

Outcome criterion6() {
  const ThreeKenmotsuStructure w = warped_product(flat_warped_spec(1, 1.0));
  const CheckReport r = check_gauss_relations(w, sample(w.chart(), 100, 4, 6), 1e-8);
  std::ostringstream os;
  os << "max residual " << sci(r.max_residual);
  for (const Residual& p : r.parts) os << ", " << p.name << " " << sci(p.value);
  return {r.pass, os.str()};
}

Outcome criterion7() {
  const ThreeKenmotsuStructure s = example_r5();
  const SampleSet smp = sample(s.chart(), 50, 4, 7);
  const ThreeKenmotsuStructure c = compose_third(s.phi(1), s.phi(2), s.eta(), s.xi(), s.g(), smp);
  double table = 0.0;
  const std::array<Vec, 3> j = quaternion_tables();
  for (const Point& p : smp.points) {
    const Vec phi3 = c.phi(3).eval(p);
    Vec expected(25, 0.0);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) expected[static_cast<std::size_t>((a + 1) * 5 + b + 1)] = j[2][static_cast<std::size_t>(a * 4 + b)];
    table = std::max(table, max_abs_diff(phi3, expected));
  }
  double suite = 0.0;
  bool all = true;
  for (int a = 1; a <= 3; ++a) {
    const AlmostContactMetricStructure st = c.structure(a);
    for (const CheckReport& r : {check_almost_contact(st, smp, 1e-10), check_kenmotsu(st, smp, 1e-10),
                                 check_reeb_identities(st, smp, 1e-10), check_form_identities(st, smp, 1e-10)}) {
      all = all && r.pass;
      suite = std::max(suite, r.max_residual);
    }
  }
  const CheckReport tr = verify_triple(c, smp, 1e-10);
  all = all && tr.pass;
  return {table < 1e-12 && all, "phi3 table error " + sci(table) + ", Kenmotsu suite max " + sci(suite)};
}

Outcome criterion8() {
  double xig = 0.0, lc = 0.0;
  std::vector<ThreeKenmotsuStructure> charts{example_r5_tchart()};
  for (double c : {0.5, 1.0, 2.0}) charts.push_back(warped_product(flat_warped_spec(1, c)));
  for (const ThreeKenmotsuStructure& t : charts) {
    const SampleSet smp = sample(t.chart(), 50, 1, 8);
    xig = std::max(xig, check_xig_lemma(t.structure(1), smp, 1e-10).max_residual);
    lc = std::max(lc, check_lc_components(t.structure(1), smp, 1e-9).max_residual);
  }
  return {xig < 1e-10 && lc < 1e-9, "xi g - 2g " + sci(xig) + ", Levi-Civita components " + sci(lc)};
}

Outcome criterion9() {
  const ThreeKenmotsuStructure f = flat_control();
  const SampleSet smp = sample(f.chart(), 20, 4, 9);
  const double eq1 = check_kenmotsu(f.structure(1), smp, 1e-10).max_residual;
  const double eq2 = check_reeb_identities(f.structure(1), smp, 1e-10).max_residual;
  const double hs = check_h_sum(f, smp, 1e-9).max_residual;
  return {eq1 > 0.1 && eq2 > 0.1 && hs > 0.1,
          "flat control residuals: defect " + sci(eq1) + ", reeb " + sci(eq2) + ", h sum " + sci(hs)};
}

// Jets of every input field against finite differences of its plain values.
void audit_field(const TensorField& f, const SampleSet& smp, double& worst, std::size_t& compared, bool& ok) {
  for (const Point& p : smp.points) {
    const std::vector<Jet2> jets = f.jet_eval(p);
    for (std::size_t c = 0; c < f.size(); ++c) {
      const fd::Fn plain = [&f, c](const std::vector<double>& x) { return f.evaluate<double>(x)[c]; };
      for (int i = 0; i < p.dim(); ++i) {
        const double o1 = fd::first(plain, p.coords, i);
        worst = std::max(worst, std::abs(jets[c].d(i) - o1) / std::max(1.0, std::abs(o1)));
        ok = ok && fd::close(jets[c].d(i), o1);
        ++compared;
        for (int j = i; j < p.dim(); ++j) {
          const double o2 = fd::second(plain, p.coords, i, j);
          worst = std::max(worst, std::abs(jets[c].d2(i, j) - o2) / std::max(1.0, std::abs(o2)));
          ok = ok && fd::close(jets[c].d2(i, j), o2);
          ++compared;
        }
      }
    }
  }
}

Outcome criterion10() {
  double worst = 0.0;
  std::size_t compared = 0;
  bool ok = true;
  std::vector<ThreeKenmotsuStructure> models{example_r5(), example_r5_tchart()};
  for (double c : {0.5, 1.0, 2.0}) models.push_back(warped_product(flat_warped_spec(1, c)));
  for (const ThreeKenmotsuStructure& t : models) {
    const SampleSet smp = sample(t.chart(), 50, 0, 10);
    audit_field(t.g().field(), smp, worst, compared, ok);
    audit_field(t.xi(), smp, worst, compared, ok);
    audit_field(t.eta(), smp, worst, compared, ok);
    for (int a = 1; a <= 3; ++a) audit_field(t.phi(a), smp, worst, compared, ok);
  }
  return {ok, "max relative jet/FD gap " + sci(worst) + " over " + std::to_string(compared) + " derivatives"};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4}, {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10},
  };
  int failed = 0;
  for (const auto& [n, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("criterion %2d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
