#ifndef NARLAB_KERNELS_HPP
#define NARLAB_KERNELS_HPP

#include "narlab/htype.hpp"
#include "narlab/quadrature.hpp"

namespace narlab {

// lambda = i*beta throughout; both normalizing constants are determined
// numerically so that the kernels have unit mass on N.
struct SpectralParam {
    double beta = 1.0;
    double c_beta = 0.0;  // normalizes q^{i beta}
    double c_pk = 0.0;    // normalizes P
};

// log(16 a^2 + 8 a ||X||^2 + d(n)^2) for k >= 1, log(a^2 + ||X||^2) for the
// abelian boundary. Evaluated in log-domain so huge quadrature tail points
// neither overflow nor produce NaN.
double log_kernel_denominator(const HTypeGroup& g, double a, const NPoint& n);

// q^{i beta}_a(n) = c_beta a^{2 beta} / denom^{rho + beta}
double q_kernel(const HTypeGroup& g, const SpectralParam& param, double a, const NPoint& n);
double q_kernel_unnormalized(const HTypeGroup& g, double beta, double a, const NPoint& n);

// P_a(n) = c_pk a^Q / denom^Q (the q-kernel at beta = rho)
double poisson_p(const HTypeGroup& g, const SpectralParam& param, double a, const NPoint& n);

// Unit-mass constants by full-space quadrature of the a = 1 kernels.
SpectralParam calibrate(const HTypeGroup& g, double beta, const QuadratureSpec& quad);

// mass of denom(a=1)^{-sigma} over N; used by calibrate, exposed for tests
double kernel_mass_unnormalized(const HTypeGroup& g, double sigma, const QuadratureSpec& quad);

}  // namespace narlab

#endif
