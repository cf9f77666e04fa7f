#pragma once

#include <array>
#include <vector>

#include "klab/contact.hpp"
#include "klab/three_kenmotsu.hpp"
#include "klab/warped.hpp"

namespace klab {

/// Which half of {x0 != 0} the example lives on.
enum class ChartComponent { positive, negative };

/// The 4x4 quaternion tables J1, J2, J3 (row-major, column b is the image of
/// e_b): J1 e1 = e2, J1 e3 = e4, J2 e1 = e3, J2 e2 = -e4, J3 = J1 J2.
std::array<Vec, 3> quaternion_tables();

/// R^5 with g = x0^-2 delta, xi = -x0 d_0, eta = -dx0 / x0, and the phi
/// tables acting on x1..x4. Sampling keeps |x0| >= 0.1.
ThreeKenmotsuStructure example_r5(ChartComponent component = ChartComponent::positive);

/// The same structure pulled back along x0 = e^-t (or -e^-t), chart (t, x1..x4).
ThreeKenmotsuStructure example_r5_tchart(ChartComponent component = ChartComponent::positive);

/// Euclidean R^4m with block-diagonal quaternion tables. m < 1 is a usage error.
QuaternionicBase flat_quaternion_base(int m);

WarpedProductSpec flat_warped_spec(int m, double c = 1.0, double t_min = -3.0, double t_max = 3.0);

/// Throws StructuralError naming the first violated invariant: positive c,
/// a nonempty interval, dimension 4m, J_a^2 = -Id, J_k = J_i J_j, g Hermitian.
/// The pointwise invariants are probed at a fixed sample of base points.
void validate_spec(const WarpedProductSpec& spec);

/// dt^2 + c^2 e^{2t} g_base on (t_min, t_max) x base; xi = d_t, eta = dt,
/// phi_a = 0 on d_t and J_a on the base.
ThreeKenmotsuStructure warped_product(const WarpedProductSpec& spec);

/// Flat R^5 with xi = e0, eta = dx0 and the phi tables. Almost contact but
/// not Kenmotsu.
ThreeKenmotsuStructure flat_control();

/// diag(1, e^2t, e^2t, e^2t, e^4t) on (t, y): the last direction warps at a
/// different rate, so the metric is neither Einstein nor Ricci-parallel.
ThreeKenmotsuStructure rate_control();

/// d_0 and delta_i = d_i - eta_i d_0 on a chart with xi = d_0.
struct AdaptedFrame {
  TensorField d0;
  std::vector<TensorField> delta;
  /// max |g(d_0, d_0) - 1|, |g(d_0, delta_i)| on the probes
  double block_residual = 0.0;
  /// max |[d_0, delta_i]|, |[delta_i, delta_j]| on the probes
  double bracket_residual = 0.0;
};

/// Throws NotAdaptedError if xi differs from d_0 by more than 1e-12 at a probe.
AdaptedFrame adapted_frame(const AlmostContactMetricStructure& s, const SampleSet& probes);

/// |xi(G_ij) - 2 G_ij| / sqrt(G_ii G_jj) with G_ij = g(delta_i, delta_j).
CheckReport check_xig_lemma(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                            Execution exec = Execution::parallel);

/// nabla_{delta_i} delta_j = Gt^k_ij delta_k - G_ij d_0, nabla_{d_0} delta_i =
/// nabla_{delta_i} d_0 = delta_i and nabla_{d_0} d_0 = 0, with Gt built from G
/// and the derivations delta_i. Residuals are g-norms divided by the g-norms
/// of the frame vectors involved.
CheckReport check_lc_components(const AlmostContactMetricStructure& s, const SampleSet& samples, double tol,
                                Execution exec = Execution::parallel);

}  // namespace klab
