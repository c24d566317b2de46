#include "narlab/diffops.hpp"

#include <cmath>
#include <stdexcept>

namespace narlab {

namespace {

// coordinate indices: 0 = a, 1..dim_v = X, dim_v+1..dim_v+k = Z
SPoint shifted(const HTypeGroup& g, const SPoint& x, int coord, double h) {
    SPoint y = x;
    if (coord == 0)
        y.a += h;
    else if (coord <= g.dim_v())
        y.n.X[coord - 1] += h;
    else
        y.n.Z[coord - 1 - g.dim_v()] += h;
    return y;
}

cplx d1(const HTypeGroup& g, const SField& u, const SPoint& x, int coord, double h, int order) {
    if (order == 2)
        return (u(shifted(g, x, coord, h)) - u(shifted(g, x, coord, -h))) / (2.0 * h);
    return (-u(shifted(g, x, coord, 2.0 * h)) + 8.0 * u(shifted(g, x, coord, h)) -
            8.0 * u(shifted(g, x, coord, -h)) + u(shifted(g, x, coord, -2.0 * h))) /
           (12.0 * h);
}

cplx d2(const HTypeGroup& g, const SField& u, const SPoint& x, int coord, double h, int order,
        const cplx& u0) {
    if (order == 2)
        return (u(shifted(g, x, coord, h)) - 2.0 * u0 + u(shifted(g, x, coord, -h))) / (h * h);
    return (-u(shifted(g, x, coord, 2.0 * h)) + 16.0 * u(shifted(g, x, coord, h)) - 30.0 * u0 +
            16.0 * u(shifted(g, x, coord, -h)) - u(shifted(g, x, coord, -2.0 * h))) /
           (12.0 * h * h);
}

// mixed d_{c1} d_{c2} as composed first-derivative stencils
cplx d11(const HTypeGroup& g, const SField& u, const SPoint& x, int c1, double h1, int c2,
         double h2, int order) {
    SField inner = [&](const SPoint& y) { return d1(g, u, y, c2, h2, order); };
    return d1(g, inner, x, c1, h1, order);
}

cplx apply_L_step(const HTypeGroup& g, const SField& u, const SPoint& x, double step, int order) {
    const int dv = g.dim_v();
    const int k = g.k();
    const double a = x.a;
    const double Q = static_cast<double>(g.Q());
    const double ha = step * a;
    const double hx = step * (g.abelian_boundary() ? a : std::sqrt(a));
    const double hz = step * a;

    cplx u0 = u(x);
    cplx out = a * a * d2(g, u, x, 0, ha, order, u0) + (1.0 - Q) * a * d1(g, u, x, 0, ha, order);

    if (g.abelian_boundary()) {
        for (int i = 0; i < dv; ++i) out += a * a * d2(g, u, x, 1 + i, hx, order, u0);
        return out;
    }

    double x2 = 0.0;
    for (double c : x.n.X) x2 += c * c;
    double zcoef = a * (a + 0.25 * x2);
    for (int r = 0; r < k; ++r) out += zcoef * d2(g, u, x, 1 + dv + r, hz, order, u0);
    for (int i = 0; i < dv; ++i) out += a * d2(g, u, x, 1 + i, hx, order, u0);
    for (int r = 0; r < k; ++r) {
        for (int i = 0; i < dv; ++i) {
            double c = g.bracket_coeff(x.n.X, i, r);
            if (c == 0.0) continue;
            out += a * a * c * d11(g, u, x, 1 + i, hx, 1 + dv + r, hz, order);
        }
    }
    return out;
}

}  // namespace

cplx apply_L(const HTypeGroup& g, const SField& u, const SPoint& x, const FdScheme& scheme) {
    g.check_point(x.n);
    if (!(x.a > 0.0)) throw std::invalid_argument("apply_L requires a > 0");
    if (scheme.order != 2 && scheme.order != 4)
        throw std::invalid_argument("FdScheme.order must be 2 or 4");
    if (!(scheme.step > 0.0 && scheme.step < 0.2))
        throw std::invalid_argument("FdScheme.step must lie in (0, 0.2)");
    cplx coarse = apply_L_step(g, u, x, scheme.step, scheme.order);
    if (!scheme.richardson) return coarse;
    cplx fine = apply_L_step(g, u, x, 0.5 * scheme.step, scheme.order);
    double w = scheme.order == 2 ? 4.0 : 16.0;
    return (w * fine - coarse) / (w - 1.0);
}

cplx apply_L_beta(const HTypeGroup& g, double beta, const SField& u, const SPoint& x,
                  const FdScheme& scheme) {
    cplx lu = apply_L(g, u, x, scheme);
    double ha = scheme.step * x.a;
    cplx da = d1(g, u, x, 0, ha, scheme.order);
    if (scheme.richardson) {
        cplx da_fine = d1(g, u, x, 0, 0.5 * ha, scheme.order);
        double w = scheme.order == 2 ? 4.0 : 16.0;
        da = (w * da_fine - da) / (w - 1.0);
    }
    return lu + (1.0 - 2.0 * beta) * x.a * da;
}

double eigen_residual(const HTypeGroup& g, double beta, const SField& u,
                      const std::vector<SPoint>& points, const FdScheme& scheme) {
    const double eps = 1e-12;
    const double lambda = beta * beta - g.rho() * g.rho();
    double worst = 0.0;
    for (const auto& x : points) {
        cplx u0 = u(x);
        cplx lu = apply_L(g, u, x, scheme);
        worst = std::max(worst, std::abs(lu - lambda * u0) / (std::abs(u0) + eps));
    }
    return worst;
}

double harmonic_residual(const HTypeGroup& g, double beta, const SField& u,
                         const std::vector<SPoint>& points, const FdScheme& scheme) {
    const double eps = 1e-12;
    const double expo = beta - g.rho();
    SField v = [&](const SPoint& y) { return std::pow(y.a, expo) * u(y); };
    double worst = 0.0;
    for (const auto& x : points) {
        cplx v0 = v(x);
        cplx lv = apply_L_beta(g, beta, v, x, scheme);
        worst = std::max(worst, std::abs(lv) / (std::abs(v0) + eps));
    }
    return worst;
}

}  // namespace narlab
