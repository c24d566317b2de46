#include <cmath>

#include "doctest.h"
#include "narlab/geometry.hpp"
#include "narlab/transform.hpp"

using namespace narlab;

namespace {

QuadratureSpec quick() {
    QuadratureSpec q;
    q.rel_tol = 1e-5;
    return q;
}

SpectralParam cal(const HTypeGroup& g, double beta) {
    QuadratureSpec q;
    q.rel_tol = 1e-7;
    q.max_evals = 20'000'000;  // small sigma means heavy tails: give the mass room
    return calibrate(g, beta, q);
}

}  // namespace

TEST_CASE("Haar is the fixed point of the q-transform") {
    for (const char* preset : {"heisenberg:1", "abelian:1"}) {
        CAPTURE(preset);
        HTypeGroup g = HTypeGroup::from_preset(preset);
        SpectralParam p = cal(g, 1.0);
        BoundaryMeasure haar = make_density_measure(g, "haar");
        QuadratureSpec q = quick();
        NPoint n = g.identity();
        n.X[0] = 0.7;
        for (double a : {0.01, 0.3, 1.0, 5.0}) {
            CAPTURE(a);
            auto r = q_transform(g, p, haar, {n, a}, q);
            CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-3));
            CHECK(std::abs(r.value.imag()) < 1e-6);
        }
    }
}

TEST_CASE("atom transforms have the closed form") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    double beta = 1.0;
    SpectralParam p = cal(g, beta);
    double sigma = g.rho() + beta;
    BoundaryMeasure atom;
    atom.atoms.emplace_back(g.identity(), cplx{1.0, 0.0});
    for (double a : {0.25, 1.0, 4.0}) {
        auto r = q_transform(g, p, atom, {g.identity(), a}, quick());
        double expect = p.c_beta * std::pow(a, -2.0 * g.rho()) * std::pow(16.0, -sigma);
        CHECK(r.value.real() == doctest::Approx(expect).epsilon(1e-12));
        CHECK(r.evals == 0);  // exact sum, no quadrature
    }
}

TEST_CASE("linearity in the measure") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    SpectralParam p = cal(g, 1.0);
    QuadratureSpec q = quick();
    BoundaryMeasure half = make_density_measure(g, "haar", {0.5, 0.0});
    SPoint x{{{0.2, -0.1}, {0.3}}, 0.7};
    CHECK(q_transform(g, p, half, x, q).value.real() == doctest::Approx(0.5).epsilon(1e-3));

    BoundaryMeasure gauss = make_density_measure(g, "gaussian:1", {1.0, 0.0});
    BoundaryMeasure atom;
    atom.atoms.emplace_back(NPoint{{1.0, 0.0}, {0.0}}, cplx{0.0, 2.0});
    BoundaryMeasure sum = add_measures(gauss, atom);
    cplx lhs = q_transform(g, p, sum, x, q).value;
    cplx rhs = q_transform(g, p, gauss, x, q).value + q_transform(g, p, atom, x, q).value;
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("p-transform prefactor") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    double beta = 0.5;
    SpectralParam p = cal(g, beta);
    QuadratureSpec q = quick();
    BoundaryMeasure haar = make_density_measure(g, "haar");
    for (double a : {0.1, 1.0, 3.0}) {
        auto pt = p_transform(g, p, haar, {g.identity(), a}, q);
        auto qt = q_transform(g, p, haar, {g.identity(), a}, q);
        // consistency: a^{beta-rho} P = Q
        CHECK(std::pow(a, beta - g.rho()) * pt.value.real() ==
              doctest::Approx(qt.value.real()).epsilon(1e-12));
        // P[Haar] = a^{rho - beta}
        CHECK(pt.value.real() == doctest::Approx(std::pow(a, g.rho() - beta)).epsilon(1e-3));
    }
}

TEST_CASE("translation covariance") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    SpectralParam p = cal(g, 1.0);
    QuadratureSpec q = quick();
    BoundaryMeasure mu = make_density_measure(g, "gaussian:1");
    NPoint n1{{0.5, -0.2}, {0.1}};
    BoundaryMeasure shifted = translate_measure(g, n1, mu);
    NPoint n{{0.1, 0.3}, {-0.2}};
    for (double a : {0.5, 1.5}) {
        cplx lhs = q_transform(g, p, shifted, {g.multiply(n1, n), a}, q).value;
        cplx rhs = q_transform(g, p, mu, {n, a}, q).value;
        CHECK(std::abs(lhs - rhs) < 2e-3 * std::abs(rhs));
    }
}

TEST_CASE("Monte Carlo engine agrees with the adaptive engine") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    SpectralParam p = cal(g, 1.0);
    BoundaryMeasure mu = make_density_measure(g, "gaussian:1");
    SPoint x{{{0.3, 0.0}, {0.1}}, 0.6};
    QuadratureSpec qa = quick();
    QuadratureSpec qm = quick();
    qm.engine = QuadratureSpec::Engine::monte_carlo;
    qm.seed = 99;
    auto ra = q_transform(g, p, mu, x, qa);
    auto rm = q_transform(g, p, mu, x, qm);
    CHECK(rm.value.real() == doctest::Approx(ra.value.real()).epsilon(0.02));
    // seeded: bitwise reproducible
    auto rm2 = q_transform(g, p, mu, x, qm);
    CHECK(rm.value.real() == rm2.value.real());
}

TEST_CASE("membership finiteness check") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    double beta = 1.0;
    SpectralParam p = cal(g, beta);
    double tau = g.estimate_tau();
    QuadratureSpec q = quick();

    BoundaryMeasure haar = make_density_measure(g, "haar");
    auto [ok, value] = finiteness_check(g, p, haar, tau, q);
    CHECK(ok);
    CHECK(value > 0.0);

    // density growing like d^{2 beta + eps}: integral diverges
    BoundaryMeasure growing;
    {
        Density d;
        d.name = "growing";
        HTypeGroup gc = g;
        double expo = 2.0 * beta + 0.5;
        d.f = [gc, expo](const NPoint& n) {
            return cplx{std::pow(1.0 + gc.hnorm(n), expo), 0.0};
        };
        d.support_radius = std::numeric_limits<double>::infinity();
        growing.densities.push_back(std::move(d));
    }
    auto [ok2, value2] = finiteness_check(g, p, growing, tau, q);
    CHECK_FALSE(ok2);

    BoundaryMeasure compact = make_density_measure(g, "indicator_ball:1");
    auto [ok3, value3] = finiteness_check(g, p, compact, tau, q);
    CHECK(ok3);
}

TEST_CASE("tail integral") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    double beta = 1.0;
    SpectralParam p = cal(g, beta);
    QuadratureSpec q = quick();
    double delta = 0.5;
    SPoint origin{g.identity(), 1.0};

    // measure supported inside B(0, delta/2): empty intersection
    BoundaryMeasure inner = make_density_measure(g, "indicator_ball:0.25");
    CHECK(tail_integral(g, p, inner, delta, origin, q) == doctest::Approx(0.0).epsilon(1e-12));

    // Haar: tail decreases to 0 along a = 2^{-j}, and tail / a^{2 beta}
    // increases towards a finite constant, approaching it closely by a ~ 1e-3
    BoundaryMeasure haar = make_density_measure(g, "haar");
    double prev = std::numeric_limits<double>::infinity();
    std::vector<double> ratios;
    for (int j = 0; j <= 10; ++j) {
        double a = std::pow(2.0, -j);
        double t = tail_integral(g, p, haar, delta, {g.identity(), a}, q);
        CHECK(t < prev * (1.0 + 1e-9));
        prev = t;
        ratios.push_back(t / std::pow(a, 2.0 * beta));
    }
    for (size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] > ratios[i - 1] * (1.0 - 1e-6));
    CHECK(ratios[10] / ratios[9] < 1.3);  // flattening out: the limit is finite

    // precondition: x.n must lie well inside B(0, delta)
    NPoint far{{2.0, 0.0}, {0.0}};
    CHECK_THROWS(tail_integral(g, p, haar, delta, {far, 1.0}, q));
    CHECK_THROWS(tail_integral(g, p, haar, 1.5, origin, q));
}

TEST_CASE("lower bound constant of the maximal inequality") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    SpectralParam p = cal(g, 1.0);
    double sigma = g.rho() + 1.0;
    double V = g.unit_ball_volume();

    double c1 = hl_lower_constant(g, p, 1.0, 1.0);
    double ca = 1.0 + std::sqrt(2.0);
    double expect = p.c_beta * V * std::pow(16.0 + 8.0 * ca + ca * ca, -sigma);
    CHECK(c1 == doctest::Approx(expect).epsilon(1e-12));

    // decreasing in the aperture
    double prev = hl_lower_constant(g, p, 0.1, 1.5);
    for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
        double c = hl_lower_constant(g, p, alpha, 1.5);
        CHECK(c < prev);
        prev = c;
    }
    CHECK_THROWS(hl_lower_constant(g, p, -1.0, 1.0));
    CHECK_THROWS(hl_lower_constant(g, p, 1.0, 0.5));
}

TEST_CASE("pointwise lower bound holds for simple measures") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    SpectralParam p = cal(g, 1.0);
    QuadratureSpec q = quick();
    BoundaryMeasure haar = make_density_measure(g, "haar");

    std::vector<HlSample> samples;
    for (int i = 0; i < 6; ++i) {
        Ray ray;
        ray.n0 = g.identity();
        ray.alpha = 0.5 + 0.5 * i;
        ray.omega = {1.0, 0.0};
        ray.zeta = {1.0};
        ray.theta = 0.4 * i;
        double a = std::pow(0.5, i);
        samples.push_back({ray.alpha, a, ray_point(g, ray, a)});
    }
    HlReport rep = verify_hl(g, p, haar, g.identity(), samples, q);
    CHECK(rep.checked == 6);
    CHECK(rep.violations == 0);
    CHECK(rep.min_margin > 0.0);
    CHECK_FALSE(rep.maximal_infinite);

    BoundaryMeasure zero;
    HlReport rz = verify_hl(g, p, zero, g.identity(), samples, q);
    CHECK(rz.violations == 0);
}

TEST_CASE("H3 defect") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    SpectralParam p = cal(g, 1.0);
    QuadratureSpec q = quick();
    std::vector<SPoint> pts;
    for (int j = 0; j <= 6; ++j) pts.push_back({g.identity(), std::pow(0.5, j)});

    // positive measures have identically zero defect
    BoundaryMeasure gauss = make_density_measure(g, "gaussian:1");
    auto [ok, sup] = check_H3(g, p, gauss, g.identity(), pts, q);
    CHECK(ok);
    CHECK(sup < 1e-10);
}
