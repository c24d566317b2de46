#include "narlab/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

#include "narlab/parallel.hpp"

namespace narlab {

HypSpace make_hyp_space(int l) {
    if (l < 2) throw std::invalid_argument("hyperbolic space requires l >= 2");
    return HypSpace{l, HTypeGroup::abelian(l - 1)};
}

cplx hyp_apply_L_beta(const HypSpace& h, double beta, const SField& u, const SPoint& x,
                      const FdScheme& scheme) {
    return apply_L_beta(h.boundary, beta, u, x, scheme);
}

namespace {

SPoint slope_point(double x0, double alpha, double y) {
    SPoint p;
    p.n.X = {x0 + alpha * y};
    p.a = y;
    return p;
}

LimitEstimate slope_limit(const HypSpace& h, const SpectralParam& param,
                          const BoundaryMeasure& mu, double x0, double alpha,
                          const Schedule& schedule, const QuadratureSpec& quad) {
    std::vector<std::pair<double, cplx>> samples(schedule.steps);
    for (int j = 0; j < schedule.steps; ++j) {
        double y = schedule.a0 * std::pow(schedule.ratio, j);
        samples[j] = {y, q_transform(h.boundary, param, mu, slope_point(x0, alpha, y), quad).value};
    }
    return estimate_limit_from_samples(std::move(samples), schedule.tol);
}

}  // namespace

std::vector<std::pair<double, LimitEstimate>> ray_limit_function(
    const HypSpace& h, const SpectralParam& param, const BoundaryMeasure& mu, double x0,
    const std::vector<double>& alpha_grid, const Schedule& schedule, const QuadratureSpec& quad) {
    if (h.l != 2)
        throw std::invalid_argument("ray_limit_function is defined for l = 2 only");
    schedule.validate();
    std::vector<std::pair<double, LimitEstimate>> out(alpha_grid.size());
    parallel_for(static_cast<std::int64_t>(alpha_grid.size()), [&](std::int64_t i) {
        out[i] = {alpha_grid[i], slope_limit(h, param, mu, x0, alpha_grid[i], schedule, quad)};
    });
    return out;
}

TwoRayReport two_ray_report(const HypSpace& h, const SpectralParam& param,
                            const BoundaryMeasure& mu, double x0, double alpha1, double alpha2,
                            const std::vector<double>& alpha_grid, const Schedule& schedule,
                            const QuadratureSpec& quad) {
    if (alpha1 == alpha2) throw std::invalid_argument("two_ray_report requires alpha1 != alpha2");
    if (h.l != 2) throw std::invalid_argument("two_ray_report is defined for l = 2 only");
    schedule.validate();
    TwoRayReport rep;
    rep.alpha1 = alpha1;
    rep.alpha2 = alpha2;
    rep.L1 = slope_limit(h, param, mu, x0, alpha1, schedule, quad);
    rep.L2 = slope_limit(h, param, mu, x0, alpha2, schedule, quad);

    auto grid = ray_limit_function(h, param, mu, x0, alpha_grid, schedule, quad);
    cplx l1 = rep.L1.value, l2 = rep.L2.value;
    for (const auto& [alpha, est] : grid) {
        TwoRayGridRow row;
        row.alpha = alpha;
        row.measured = est.value;
        row.predicted = l1 + (l2 - l1) * ((alpha - alpha1) / (alpha2 - alpha1));
        row.deviation = std::abs(row.measured - row.predicted);
        row.converged = est.converged;
        rep.grid.push_back(row);
        rep.max_affine_deviation = std::max(rep.max_affine_deviation, row.deviation);
    }

    if (rep.L1.converged && rep.L2.converged &&
        std::abs(l1 - l2) <= schedule.tol * std::max(1.0, std::abs(l1))) {
        SField F = [&](const SPoint& x) {
            return q_transform(h.boundary, param, mu, x, quad).value;
        };
        NPoint n0;
        n0.X = {x0};
        rep.admissible = admissible_scan(h.boundary, F, n0, {0.5, 1.0, 2.0}, 3, quad.seed,
                                         schedule);
        rep.ran_admissible = true;
    }
    return rep;
}

}  // namespace narlab
