#include <doctest.h>

#include <limits>
#include <stdexcept>
#include <string>

#include "klab/parallel.hpp"

using namespace klab;

TEST_CASE("map_indices gives the same vector on both paths") {
  auto f = [](std::size_t i) { return static_cast<double>(i * i) + 0.5; };
  const auto s = map_indices<double>(1000, f, Execution::serial);
  const auto p = map_indices<double>(1000, f, Execution::parallel);
  CHECK(s == p);
  CHECK(s[31] == 961.5);
  CHECK(map_indices<double>(0, f, Execution::parallel).empty());
}

TEST_CASE("map_indices rethrows the lowest failing index") {
  auto f = [](std::size_t i) -> int {
    if (i % 7 == 3) throw std::runtime_error(std::to_string(i));
    return 0;
  };
  for (Execution e : {Execution::serial, Execution::parallel}) {
    try {
      (void)map_indices<int>(200, f, e);
      FAIL("expected a throw");
    } catch (const std::runtime_error& err) {
      CHECK(std::string(err.what()) == "3");
    }
  }
}

TEST_CASE("reduction ties go to the lowest index") {
  SampleSet s;
  s.seed = 9;
  for (int i = 0; i < 4; ++i) {
    s.points.push_back(Point{static_cast<double>(i)});
    s.vectors.push_back({Vec{1.0}});
  }
  const CheckSpec spec{"t", "a", 1.0, {"p", "q"}};
  std::vector<PointResidual> res(4);
  for (int i = 0; i < 4; ++i) {
    res[static_cast<std::size_t>(i)].parts = {i == 0 ? 0.1 : 0.5, 0.2};
    res[static_cast<std::size_t>(i)].worst_vector = Vec{static_cast<double>(i)};
  }
  const CheckReport r = reduce_points(spec, s, res);
  CHECK(r.max_residual == 0.5);
  CHECK(r.worst_point == Vec{1.0});
  CHECK(r.worst_vector == Vec{1.0});
  CHECK(r.parts.size() == 2);
  CHECK(r.parts[1].value == 0.2);
  CHECK(r.pass);
  CHECK(r.seed == 9);
  CHECK(r.points == 4);
  CHECK(r.vectors == 1);
}

TEST_CASE("NaN residuals fail") {
  ResidualTracker t(1);
  t.update(0, 1e-3, Vec{1.0});
  t.update(0, std::numeric_limits<double>::quiet_NaN(), Vec{2.0});
  const PointResidual pr = t.take();
  CHECK(pr.worst_vector == Vec{2.0});
  SampleSet s;
  s.points = {Point{0.0}};
  s.vectors = {{Vec{1.0}}};
  const CheckReport r = reduce_points(CheckSpec{"n", "", 1.0, {"p"}}, s, {pr});
  CHECK_FALSE(r.pass);
}

TEST_CASE("run_check serial and parallel agree") {
  SampleSet s;
  for (int i = 0; i < 64; ++i) {
    s.points.push_back(Point{static_cast<double>(i % 5)});
    s.vectors.push_back({Vec{1.0}, Vec{-1.0}});
  }
  auto per_point = [](const Point& p, const std::vector<Vec>& vs) {
    ResidualTracker t(1);
    for (const Vec& v : vs) t.update(0, p.coords[0] * v[0], v);
    return t.take();
  };
  const CheckSpec spec{"k", "", 10.0, {"p"}};
  CHECK(run_check(spec, s, per_point, Execution::serial) == run_check(spec, s, per_point, Execution::parallel));
  CHECK(run_check(spec, s, per_point, Execution::serial).worst_point == Vec{4.0});
}
