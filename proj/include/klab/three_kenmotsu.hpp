#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "klab/contact.hpp"
#include "klab/warped.hpp"

namespace klab {

/// Three structures (phi_a, xi, eta, g), a = 1..3, sharing xi, eta and g on a
/// chart of dimension 4n+1. Construction only checks shapes; the identities
/// are measured by the verifiers below.
class ThreeKenmotsuStructure {
 public:
  ThreeKenmotsuStructure(std::array<TensorField, 3> phis, TensorField xi, TensorField eta, MetricField g,
                         std::optional<WarpedProductSpec> source = std::nullopt);

  int dim() const { return g_.dim(); }
  int n() const { return (dim() - 1) / 4; }

  /// alpha in 1..3
  const TensorField& phi(int alpha) const;
  const TensorField& xi() const { return xi_; }
  const TensorField& eta() const { return eta_; }
  const MetricField& g() const { return g_; }
  const Chart& chart() const { return g_.chart(); }
  const ChartPtr& chart_ptr() const { return g_.chart_ptr(); }

  AlmostContactMetricStructure structure(int alpha) const;
  const std::optional<WarpedProductSpec>& warped_source() const { return source_; }

 private:
  std::array<TensorField, 3> phis_;
  TensorField xi_, eta_;
  MetricField g_;
  std::optional<WarpedProductSpec> source_;
};

/// A tangent vector at a point with eta(v) = 0.
struct HVector {
  Point base;
  Vec v;
};

/// v - eta(v) xi at p.
HVector project_H(const ThreeKenmotsuStructure& t, const Point& p, std::span<const double> v);

/// phi_k = phi_i o phi_j for the even permutations (i,j,k) of (1,2,3).
CheckReport verify_triple(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                          Execution exec = Execution::parallel);

/// phi_i phi_j + phi_j phi_i = 0 on H, reported apart from the triple relations.
CheckReport check_anticommutativity(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                    Execution exec = Execution::parallel);

/// The triple (phi1, phi2, phi1 o phi2). Throws PreconditionError unless
/// phi1 phi2 = -phi2 phi1 within `tol` on the probe sample.
ThreeKenmotsuStructure compose_third(const TensorField& phi1, const TensorField& phi2, const TensorField& eta,
                                     const TensorField& xi, const MetricField& g, const SampleSet& probe,
                                     double tol = 1e-10);

/// -R(X, phi_a X, X, phi_a X) / g(X,X)^2 for X in H.
double holomorphic_sectional(const ThreeKenmotsuStructure& t, int alpha, const HVector& x);

/// The same quotient from precomputed point data.
double holomorphic_sectional(const PointGeometry& geo, std::span<const double> phi, std::span<const double> x);

/// |H1(X) + H2(X) + H3(X) + 3| over sampled X in H.
CheckReport check_h_sum(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                        Execution exec = Execution::parallel);

/// g-norm of R(X,Y) phi Z - [g(phi Y,Z)X - g(phi X,Z)Y + g(Y,Z) phi X - g(X,Z) phi Y + phi R(X,Y)Z]
/// with phi = phi_alpha.
double check_phi_curvature_identity(const ThreeKenmotsuStructure& t, int alpha, std::span<const double> x,
                                    std::span<const double> y, std::span<const double> z, const Point& p);

/// The scalar form g(R(X,Y) phi Z, phi W) of the same identity.
double check_phi_curvature_identity(const ThreeKenmotsuStructure& t, int alpha, std::span<const double> x,
                                    std::span<const double> y, std::span<const double> z,
                                    std::span<const double> w, const Point& p);

CheckReport check_phi_curvature(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                Execution exec = Execution::parallel);

struct EinsteinFit {
  double lambda = 0.0;
  double residual = 0.0;
  std::size_t worst_index = 0;
};

/// lambda = sum <Ric, g> / sum <g, g>; residual = max |Ric - lambda g| / |g|
/// (coordinate Frobenius norms). Needs at least five points.
EinsteinFit einstein_fit(const MetricField& g, const std::vector<Point>& points,
                         Execution exec = Execution::parallel);

/// |nabla_V Ric| relative to the size of its two cancelling parts, with the
/// directional derivative of the jet-exact Ricci tensor taken by two-level
/// Richardson extrapolation of central differences (base step 1e-3).
double ricci_parallel_defect(const MetricField& g, const Point& p, std::span<const double> direction);

/// eta(nabla_X Y) xi with Y extended as the H-projection of a constant field.
Vec second_fundamental_form(const ThreeKenmotsuStructure& t, const HVector& x, const HVector& y);

/// h(X,Y) + g(X,Y) xi = 0 on H. The note carries the residual of
/// h(X,Y) - g(X,Y) xi as well.
CheckReport check_second_fundamental_form(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                          Execution exec = Execution::parallel);

/// R = Rbar - g(X,W)g(Y,Z) + g(X,Z)g(Y,W) and Ricbar = Ric + 4n g on H, with
/// the barred tensors computed intrinsically on the leaf chart. Requires a
/// structure built by warped_product.
CheckReport check_gauss_relations(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                  Execution exec = Execution::parallel);

struct QuaternionicVolume {
  KForm omega4;
  KForm volume_form;
  /// Top component on the coordinate frame.
  double vol = 0.0;
  /// Volume form on the g-normalised coordinate frame.
  double normalised = 0.0;
  bool degenerate = false;
};

/// Omega = sum_a Omega_a ^ Omega_a and Omega^n ^ eta at p.
QuaternionicVolume quaternionic_volume(const ThreeKenmotsuStructure& t, const Point& p);

CheckReport check_volume(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                         Execution exec = Execution::parallel);

CheckReport check_einstein(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                           Execution exec = Execution::parallel);

CheckReport check_ricci_parallel(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                 Execution exec = Execution::parallel);

/// Rebuilds phi3 from phi1 o phi2 and compares it with the stored phi3; also
/// measures the Kenmotsu defect of the rebuilt structure.
CheckReport check_compose_round_trip(const ThreeKenmotsuStructure& t, const SampleSet& samples, double tol,
                                     Execution exec = Execution::parallel);

}  // namespace klab
