#ifndef NARLAB_HYPERBOLIC_HPP
#define NARLAB_HYPERBOLIC_HPP

#include "narlab/diffops.hpp"
#include "narlab/geometry.hpp"

namespace narlab {

// Real hyperbolic space H^l in the upper half-space model: the degenerate
// case with abelian boundary R^{l-1}, homogeneous dimension Q = l - 1 and
// rho = (l - 1)/2. All kernel and transform machinery is inherited from the
// abelian boundary group.
struct HypSpace {
    int l = 2;
    HTypeGroup boundary;

    double Q() const { return static_cast<double>(l - 1); }
    double rho() const { return 0.5 * (l - 1); }
};

HypSpace make_hyp_space(int l);

// L^beta = y^2 (Delta_x + d_y^2) + (1 - Q) y d_y + (1 - 2 beta) y d_y,
// evaluated by the same finite differences as the general case.
cplx hyp_apply_L_beta(const HypSpace& h, double beta, const SField& u, const SPoint& x,
                      const FdScheme& scheme);

// G(alpha) = lim_{y -> 0} Q_{i beta}[mu](x0 + alpha y, y), l = 2 only.
std::vector<std::pair<double, LimitEstimate>> ray_limit_function(
    const HypSpace& h, const SpectralParam& param, const BoundaryMeasure& mu, double x0,
    const std::vector<double>& alpha_grid, const Schedule& schedule, const QuadratureSpec& quad);

struct TwoRayGridRow {
    double alpha = 0.0;
    cplx measured{0.0, 0.0};
    cplx predicted{0.0, 0.0};
    double deviation = 0.0;
    bool converged = false;
};

// Two-ray experiment: ray limits L1, L2 at slopes alpha1 != alpha2, the
// affine interpolation L(alpha), and the measured deviation |G - L| on the
// grid. The affinity deviation is reported, never asserted. When L1 = L2 an
// admissible scan probes the non-tangential conclusion.
struct TwoRayReport {
    double alpha1 = 0.0, alpha2 = 0.0;
    LimitEstimate L1, L2;
    std::vector<TwoRayGridRow> grid;
    double max_affine_deviation = 0.0;
    bool ran_admissible = false;
    LimitEstimate admissible;
};

TwoRayReport two_ray_report(const HypSpace& h, const SpectralParam& param,
                            const BoundaryMeasure& mu, double x0, double alpha1, double alpha2,
                            const std::vector<double>& alpha_grid, const Schedule& schedule,
                            const QuadratureSpec& quad);

}  // namespace narlab

#endif
