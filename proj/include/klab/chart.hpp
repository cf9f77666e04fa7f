#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace klab {

using Vec = std::vector<double>;

/// A coordinate tuple on some chart.
struct Point {
  Vec coords;

  Point() = default;
  explicit Point(Vec c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](std::size_t i) const { return coords[i]; }
};

/// A coordinate chart: dimension, validity predicate, and the box used for
/// random sampling. `admissible` is stricter than `contains`; it keeps
/// sampled points away from degenerate regions of the chart.
class Chart {
 public:
  using Predicate = std::function<bool(std::span<const double>)>;

  Chart(std::string name, int dim, Predicate contains, Vec box_lower, Vec box_upper,
        Predicate admissible = nullptr);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const Vec& box_lower() const { return lower_; }
  const Vec& box_upper() const { return upper_; }

  bool contains(std::span<const double> x) const;
  bool admissible(std::span<const double> x) const;

  /// Throws DomainError if `p` has the wrong length or lies outside the chart.
  void require(const Point& p) const;

 private:
  std::string name_;
  int dim_;
  Predicate contains_;
  Predicate admissible_;
  Vec lower_;
  Vec upper_;
};

using ChartPtr = std::shared_ptr<const Chart>;

/// R^dim with the given sampling box half-width.
ChartPtr euclidean_chart(std::string name, int dim, double half_width = 2.0);

}  // namespace klab
