#pragma once

#include <span>
#include <vector>

#include "klab/forms.hpp"
#include "klab/geometry.hpp"
#include "klab/parallel.hpp"
#include "klab/report.hpp"
#include "klab/sampling.hpp"
#include "klab/tensor_field.hpp"

namespace klab {

/// (phi, xi, eta, g) on one chart of dimension 2n+1.
class AlmostContactMetricStructure {
 public:
  AlmostContactMetricStructure(TensorField phi, TensorField xi, TensorField eta, MetricField g);

  const TensorField& phi() const { return phi_; }
  const TensorField& xi() const { return xi_; }
  const TensorField& eta() const { return eta_; }
  const MetricField& g() const { return g_; }
  const Chart& chart() const { return g_.chart(); }
  const ChartPtr& chart_ptr() const { return g_.chart_ptr(); }
  int dim() const { return g_.dim(); }
  int n() const { return (dim() - 1) / 2; }

 private:
  TensorField phi_, xi_, eta_;
  MetricField g_;
};

/// The structure and its Levi-Civita data evaluated at one point.
struct StructureAt {
  StructureAt(const AlmostContactMetricStructure& s, const Point& p);

  PointGeometry geo;
  Vec xi;
  Vec eta;
  Vec phi;
  std::vector<Jet2> phi_jets;

  Vec apply_phi(std::span<const double> v) const;
  double eta_of(std::span<const double> v) const;
  /// (nabla_X phi) as a (1,1) array.
  Vec nabla_phi(std::span<const double> x) const;
  /// (nabla_X phi)Y - g(phi X, Y) xi + eta(Y) phi X
  Vec kenmotsu_defect(std::span<const double> x, std::span<const double> y) const;
};

/// Coordinate frame and sample directions at a point, each normalised to
/// unit length in g.
std::vector<Vec> unit_test_vectors(const PointGeometry& geo, const std::vector<Vec>& directions);

/// Max residual of the five almost-contact-metric identities.
CheckReport check_almost_contact(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                                 Execution exec = Execution::parallel);

/// (nabla_X phi)Y - g(phi X, Y) xi + eta(Y) phi X at p; zero iff Kenmotsu along (X,Y).
Vec kenmotsu_defect(const AlmostContactMetricStructure& s, const TensorField& x, const TensorField& y,
                    const Point& p);

CheckReport check_kenmotsu(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                           Execution exec = Execution::parallel);

/// nabla_X xi = X - eta(X) xi and (nabla_X eta)Y = g(X,Y) - eta(X) eta(Y).
CheckReport check_reeb_identities(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                                  Execution exec = Execution::parallel);

/// Omega(X,Y) = g(X, phi Y).
KFormField kahler_form(const AlmostContactMetricStructure& s);

/// d eta = 0 and d Omega - 2 eta ^ Omega = 0 (shuffle-sum wedge normalisation).
/// The note also records the residual of d Omega - eta ^ Omega, i.e. the
/// identity written with a unit factor.
CheckReport check_form_identities(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                                  Execution exec = Execution::parallel);

}  // namespace klab
