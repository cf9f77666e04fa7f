#include "klab/chart.hpp"

#include <sstream>

#include "klab/errors.hpp"

namespace klab {

Chart::Chart(std::string name, int dim, Predicate contains, Vec box_lower, Vec box_upper,
             Predicate admissible)
    : name_(std::move(name)),
      dim_(dim),
      contains_(std::move(contains)),
      admissible_(std::move(admissible)),
      lower_(std::move(box_lower)),
      upper_(std::move(box_upper)) {
  if (dim_ < 1) throw UsageError("chart dimension must be positive");
  if (static_cast<int>(lower_.size()) != dim_ || static_cast<int>(upper_.size()) != dim_) {
    throw UsageError("chart sampling box does not match chart dimension");
  }
}

bool Chart::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) return false;
  return !contains_ || contains_(x);
}

bool Chart::admissible(std::span<const double> x) const {
  if (!contains(x)) return false;
  return !admissible_ || admissible_(x);
}

void Chart::require(const Point& p) const {
  if (p.dim() != dim_) {
    std::ostringstream os;
    os << "point has " << p.dim() << " coordinates, chart '" << name_ << "' has dimension " << dim_;
    throw DomainError(os.str());
  }
  if (!contains(p.coords)) {
    std::ostringstream os;
    os << "point (";
    for (std::size_t i = 0; i < p.coords.size(); ++i) os << (i ? ", " : "") << p.coords[i];
    os << ") lies outside chart '" << name_ << "'";
    throw DomainError(os.str());
  }
}

ChartPtr euclidean_chart(std::string name, int dim, double half_width) {
  return std::make_shared<Chart>(std::move(name), dim, nullptr, Vec(static_cast<std::size_t>(dim), -half_width),
                                 Vec(static_cast<std::size_t>(dim), half_width));
}

}  // namespace klab
