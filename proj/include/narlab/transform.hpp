#ifndef NARLAB_TRANSFORM_HPP
#define NARLAB_TRANSFORM_HPP

#include "narlab/kernels.hpp"
#include "narlab/measures.hpp"

namespace narlab {

struct TransformResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
    std::int64_t evals = 0;
};

// Q_{i beta}[mu](n, a): atoms summed exactly, densities integrated after the
// substitution n1 = n * delta_a(m^{-1}), which turns the integral into
// integral of f(n delta_a(m^{-1})) q_1(m) dm(m). The adaptive engine
// integrates that directly; the Monte Carlo engine samples m from the
// normalized kernel itself (exact Beta-distribution radial marginals).
TransformResult q_transform(const HTypeGroup& g, const SpectralParam& param,
                            const BoundaryMeasure& mu, const SPoint& x,
                            const QuadratureSpec& quad);

// P_{i beta}[mu] = a^{rho - beta} Q_{i beta}[mu]
TransformResult p_transform(const HTypeGroup& g, const SpectralParam& param,
                            const BoundaryMeasure& mu, const SPoint& x,
                            const QuadratureSpec& quad);

// Membership test for M_beta: finiteness of
// int (16 + d(n)^2 / (4 tau^2))^{-(rho+beta)} d|mu|(n), with the tail handled
// by dyadic shell extrapolation. Returns (finite?, value).
std::pair<bool, double> finiteness_check(const HTypeGroup& g, const SpectralParam& param,
                                         const BoundaryMeasure& mu, double tau,
                                         const QuadratureSpec& quad);

// int over B(0, delta)^c of q_a^{i beta}(n1^{-1} n) d|mu|(n1);
// requires x.n in B(0, delta^2 / (2 tau)).
double tail_integral(const HTypeGroup& g, const SpectralParam& param, const BoundaryMeasure& mu,
                     double delta, const SPoint& x, const QuadratureSpec& quad);

// c_beta m(B(0,1)) / (16 + 8 C_alpha tau + C_alpha^2 tau^2)^{rho+beta},
// C_alpha = 1 + sqrt(2) alpha (Euclidean variant for the abelian boundary)
double hl_lower_constant(const HTypeGroup& g, const SpectralParam& param, double alpha,
                         double tau);

struct HlSample {
    double alpha = 1.0;
    double a = 1.0;
    SPoint point;  // the ray point gamma_{n0,alpha,omega,zeta,theta}(a)
};

struct HlReport {
    int checked = 0;
    int violations = 0;
    double min_margin = 0.0;      // min over samples of rhs - lhs in part (a)
    double part_b_sup = 0.0;      // sup |Q[mu]| over the sample points
    double maximal_value = 0.0;   // M_HL(mu)(n0) on a default grid
    bool maximal_infinite = false;
    double part_b_ratio = 0.0;    // part_b_sup / maximal_value when finite
};

HlReport verify_hl(const HTypeGroup& g, const SpectralParam& param, const BoundaryMeasure& mu,
                   const NPoint& n0, const std::vector<HlSample>& samples,
                   const QuadratureSpec& quad);

// (H3): sampled sup of Q[|mu|] - |Q[mu]| near (n0, 0); returns
// (bounded?, sup). Samples should approach a -> 0.
std::pair<bool, double> check_H3(const HTypeGroup& g, const SpectralParam& param,
                                 const BoundaryMeasure& mu, const NPoint& n0,
                                 const std::vector<SPoint>& neighborhood_sample,
                                 const QuadratureSpec& quad);

}  // namespace narlab

#endif
