#include <doctest.h>

#include <cmath>

#include "fd_oracle.hpp"
#include "klab/errors.hpp"
#include "klab/manifolds.hpp"
#include "klab/sampling.hpp"

using namespace klab;

TEST_CASE("jet of x0^2") {
  const ChartPtr chart = euclidean_chart("R5", 5);
  const TensorField f = TensorField::make(chart, kScalar, [](auto x, auto out) { out[0] = square(x[0]); });
  const Jet2 j = jet2_eval(f, Point{2, 0, 0, 0, 0})[0];
  CHECK(j.value() == 4.0);
  CHECK(j.d(0) == 4.0);
  CHECK(j.d2(0, 0) == 2.0);
  CHECK(j.d(1) == 0.0);
}

TEST_CASE("jet of 1/x0^2") {
  const ChartPtr chart = euclidean_chart("R5", 5);
  const TensorField f = TensorField::make(chart, kScalar, [](auto x, auto out) { out[0] = 1.0 / square(x[0]); });
  const Jet2 j = jet2_eval(f, Point{1, 0.3, 0, 0, 0})[0];
  CHECK(j.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(j.d(0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(j.d2(0, 0) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("jet outside the chart is a domain error") {
  const ThreeKenmotsuStructure s = example_r5();
  CHECK_THROWS_AS(jet2_eval(s.g().field(), Point{-1, 0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(jet2_eval(s.g().field(), Point{1, 0, 0}), DomainError);
}

TEST_CASE("jet value equals plain evaluation") {
  for (const ThreeKenmotsuStructure& s : {example_r5(), example_r5_tchart(), warped_product(flat_warped_spec(1, 2.0))}) {
    const SampleSet smp = sample(s.chart(), 20, 0, 3);
    for (const Point& p : smp.points) {
      for (const TensorField* f : {&s.g().field(), &s.xi(), &s.eta(), &s.phi(1), &s.phi(2), &s.phi(3)}) {
        const Vec v = f->eval(p);
        const std::vector<Jet2> j = f->jet_eval(p);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(j[i].value() - v[i]) <= 1e-14 * std::max(1.0, std::abs(v[i])));
      }
    }
  }
}

TEST_CASE("jet arithmetic obeys Leibniz and chain rules") {
  const ChartPtr chart = euclidean_chart("R3", 3);
  const TensorField f = TensorField::make(chart, kScalar, [](auto x, auto out) {
    out[0] = klab::exp(klab::sin(x[0]) * x[1]) / klab::sqrt(2.0 + klab::cos(x[2])) +
             klab::pow(1.5 + x[0] * x[0], 1.7) * klab::log(3.0 + x[1] * x[2]);
  });
  fd::Fn plain = [&](const std::vector<double>& x) { return f.eval(Point(x))[0]; };
  const SampleSet smp = sample(*chart, 10, 0, 11);
  for (const Point& p : smp.points) {
    const Jet2 j = f.jet_eval(p)[0];
    for (int a = 0; a < 3; ++a) {
      CHECK(fd::close(j.d(a), fd::first(plain, p.coords, a)));
      for (int b = 0; b < 3; ++b) {
        CHECK(fd::close(j.d2(a, b), fd::second(plain, p.coords, a, b)));
        CHECK(j.d2(a, b) == j.d2(b, a));
      }
    }
  }
}

TEST_CASE("jet product rule is exact on polynomials") {
  const Jet2 x = Jet2::variable(2, 0, 3.0);
  const Jet2 y = Jet2::variable(2, 1, -2.0);
  const Jet2 p = x * x * y + 4.0 * y;
  CHECK(p.value() == 3.0 * 3.0 * -2.0 - 8.0);
  CHECK(p.d(0) == 2.0 * 3.0 * -2.0);
  CHECK(p.d(1) == 9.0 + 4.0);
  CHECK(p.d2(0, 0) == -4.0);
  CHECK(p.d2(0, 1) == 6.0);
  CHECK(p.d2(1, 1) == 0.0);
}
