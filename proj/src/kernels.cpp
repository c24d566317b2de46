#include "narlab/kernels.hpp"

#include <cmath>
#include <limits>

namespace narlab {

namespace {

double log_sum_exp4(const double* terms, int count) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) m = std::max(m, terms[i]);
    if (!std::isfinite(m)) return m;  // all -inf, or an inf term dominates
    double s = 0.0;
    for (int i = 0; i < count; ++i) s += std::exp(terms[i] - m);
    return m + std::log(s);
}

}  // namespace

double log_kernel_denominator(const HTypeGroup& g, double a, const NPoint& n) {
    if (!(a > 0.0)) throw std::invalid_argument("kernel requires a > 0");
    double x2 = 0.0;
    for (double x : n.X) x2 += x * x;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    double log_a = std::log(a);
    double log_x2 = x2 > 0.0 ? std::log(x2) : neg_inf;
    if (g.abelian_boundary()) {
        double terms[2] = {2.0 * log_a, log_x2};
        return log_sum_exp4(terms, 2);
    }
    double z2 = 0.0;
    for (double z : n.Z) z2 += z * z;
    double log_z2 = z2 > 0.0 ? std::log(z2) : neg_inf;
    double log16 = std::log(16.0);
    double terms[4] = {
        log16 + 2.0 * log_a,              // 16 a^2
        std::log(8.0) + log_a + log_x2,   // 8 a ||X||^2
        2.0 * log_x2,                     // ||X||^4
        log16 + log_z2,                   // 16 ||Z||^2
    };
    return log_sum_exp4(terms, 4);
}

double q_kernel_unnormalized(const HTypeGroup& g, double beta, double a, const NPoint& n) {
    if (!(beta > 0.0)) throw std::invalid_argument("q kernel requires beta > 0");
    double sigma = g.rho() + beta;
    double ld = log_kernel_denominator(g, a, n);
    return std::exp(2.0 * beta * std::log(a) - sigma * ld);
}

double q_kernel(const HTypeGroup& g, const SpectralParam& param, double a, const NPoint& n) {
    return param.c_beta * q_kernel_unnormalized(g, param.beta, a, n);
}

double poisson_p(const HTypeGroup& g, const SpectralParam& param, double a, const NPoint& n) {
    double Q = static_cast<double>(g.Q());
    double ld = log_kernel_denominator(g, a, n);
    return param.c_pk * std::exp(Q * std::log(a) - Q * ld);
}

double kernel_mass_unnormalized(const HTypeGroup& g, double sigma, const QuadratureSpec& quad) {
    quad.validate();
    const int dv = g.dim_v();
    const int k = g.k();
    const int dim = dv + k;
    BoxIntegrand f = [&g, sigma, dv, k](const double* x, int) -> std::complex<double> {
        NPoint n;
        n.X.assign(x, x + dv);
        n.Z.assign(x + dv, x + dv + k);
        double ld = log_kernel_denominator(g, 1.0, n);
        return {std::exp(-sigma * ld), 0.0};
    };
    IntegralResult r = integrate_rd(f, dim, quad, 2.0);
    if (!r.converged)
        throw QuadratureError("kernel mass quadrature did not converge within budget");
    if (!(r.value.real() > 0.0) || !std::isfinite(r.value.real()))
        throw QuadratureError("kernel mass diverged; check that beta > 0");
    return r.value.real();
}

SpectralParam calibrate(const HTypeGroup& g, double beta, const QuadratureSpec& quad) {
    if (!(beta > 0.0)) throw std::invalid_argument("calibrate requires beta > 0");
    SpectralParam p;
    p.beta = beta;
    p.c_beta = 1.0 / kernel_mass_unnormalized(g, g.rho() + beta, quad);
    p.c_pk = 1.0 / kernel_mass_unnormalized(g, static_cast<double>(g.Q()), quad);
    return p;
}

}  // namespace narlab
