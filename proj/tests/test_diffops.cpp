#include <cmath>

#include "doctest.h"
#include "narlab/diffops.hpp"
#include "narlab/kernels.hpp"
#include "narlab/rng.hpp"

using namespace narlab;

namespace {

std::vector<SPoint> sample_points(const HTypeGroup& g, int count, std::uint64_t seed) {
    std::vector<SPoint> pts;
    for (int i = 0; i < count; ++i) {
        CounterRng rng(seed, 1000 + static_cast<std::uint64_t>(i));
        SPoint x;
        x.a = std::exp(std::log(0.1) + std::log(20.0) * rng.next_double());
        x.n.X.resize(g.dim_v());
        x.n.Z.resize(g.k());
        for (auto& c : x.n.X) c = rng.next_gaussian();
        for (auto& c : x.n.Z) c = rng.next_gaussian();
        pts.push_back(std::move(x));
    }
    return pts;
}

}  // namespace

TEST_CASE("power functions of a diagonalize L") {
    FdScheme scheme;
    for (const char* preset : {"heisenberg:1", "heisenberg:2", "abelian:2"}) {
        CAPTURE(preset);
        HTypeGroup g = HTypeGroup::from_preset(preset);
        double Q = static_cast<double>(g.Q());
        for (double s : {0.5, 1.0, 2.0, -0.75}) {
            CAPTURE(s);
            SField u = [s](const SPoint& x) { return cplx{std::pow(x.a, s), 0.0}; };
            for (const auto& x : sample_points(g, 3, 7)) {
                cplx lu = apply_L(g, u, x, scheme);
                double expect = (s * s - Q * s) * std::pow(x.a, s);
                CHECK(lu.real() == doctest::Approx(expect).epsilon(1e-7));
                CHECK(std::abs(lu.imag()) < 1e-10);
            }
        }
    }
}

TEST_CASE("constants are annihilated") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    SField one = [](const SPoint&) { return cplx{1.0, 0.0}; };
    FdScheme scheme;
    for (const auto& x : sample_points(g, 4, 3))
        CHECK(std::abs(apply_L(g, one, x, scheme)) < 1e-10);
}

TEST_CASE("a^{rho +- beta} are eigenfunctions with eigenvalue beta^2 - rho^2") {
    FdScheme scheme;
    for (const char* preset : {"heisenberg:1", "abelian:3"}) {
        CAPTURE(preset);
        HTypeGroup g = HTypeGroup::from_preset(preset);
        double rho = g.rho();
        for (double beta : {0.25, 1.0, 1.75}) {
            CAPTURE(beta);
            SField up = [=](const SPoint& x) { return cplx{std::pow(x.a, rho + beta), 0.0}; };
            SField um = [=](const SPoint& x) { return cplx{std::pow(x.a, rho - beta), 0.0}; };
            auto pts = sample_points(g, 4, 11);
            CHECK(eigen_residual(g, beta, up, pts, scheme) < 1e-6);
            CHECK(eigen_residual(g, beta, um, pts, scheme) < 1e-6);
        }
    }
}

TEST_CASE("negative control: a wrong power has a large residual") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    // s = 1 gives eigenvalue 1 - Q = -1, but beta^2 - rho^2 = 3 for beta = 2
    SField u = [](const SPoint& x) { return cplx{x.a, 0.0}; };
    CHECK(eigen_residual(g, 2.0, u, sample_points(g, 4, 13), FdScheme{}) > 0.5);
}

TEST_CASE("the shifted operator adds (1 - 2 beta) a d_a") {
    HTypeGroup g = HTypeGroup::heisenberg(2);
    FdScheme scheme;
    double s = 1.3, beta = 0.75;
    SField u = [s](const SPoint& x) { return cplx{std::pow(x.a, s), 0.0}; };
    for (const auto& x : sample_points(g, 3, 17)) {
        cplx diff = apply_L_beta(g, beta, u, x, scheme) - apply_L(g, u, x, scheme);
        double expect = (1.0 - 2.0 * beta) * s * std::pow(x.a, s);
        CHECK(diff.real() == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("horizontal and vertical second-order terms") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    FdScheme scheme;
    auto pts = sample_points(g, 4, 23);

    // u = ||X||^2: only the a sum d_{X_i}^2 term fires, giving 2 a dim_v
    SField ux = [](const SPoint& x) {
        double s = 0.0;
        for (double c : x.n.X) s += c * c;
        return cplx{s, 0.0};
    };
    for (const auto& x : pts)
        CHECK(apply_L(g, ux, x, scheme).real() == doctest::Approx(4.0 * x.a).epsilon(1e-8));

    // u = z1^2: the a (a + ||X||^2/4) d_{Z}^2 term gives 2 a (a + ||X||^2/4)
    SField uz = [](const SPoint& x) { return cplx{x.n.Z[0] * x.n.Z[0], 0.0}; };
    for (const auto& x : pts) {
        double x2 = x.n.X[0] * x.n.X[0] + x.n.X[1] * x.n.X[1];
        double expect = 2.0 * x.a * (x.a + 0.25 * x2);
        CHECK(apply_L(g, uz, x, scheme).real() == doctest::Approx(expect).epsilon(1e-8));
    }

    // u = x1 z1 exercises only the mixed term: L u = a^2 <J X, e_1> = -a^2 x2
    SField uxz = [](const SPoint& x) { return cplx{x.n.X[0] * x.n.Z[0], 0.0}; };
    for (const auto& x : pts) {
        double expect = -x.a * x.a * x.n.X[1];
        CHECK(apply_L(g, uxz, x, scheme).real() == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("abelian boundary branch") {
    HTypeGroup g = HTypeGroup::abelian(2);
    FdScheme scheme;
    // u = ||x||^2: L u = a^2 Delta u = 4 a^2
    SField u = [](const SPoint& x) {
        return cplx{x.n.X[0] * x.n.X[0] + x.n.X[1] * x.n.X[1], 0.0};
    };
    for (const auto& x : sample_points(g, 4, 29))
        CHECK(apply_L(g, u, x, scheme).real() == doctest::Approx(4.0 * x.a * x.a).epsilon(1e-8));
}

TEST_CASE("kernel sections solve the eigenvalue equation") {
    FdScheme scheme;
    for (const char* preset : {"heisenberg:1", "abelian:2"}) {
        CAPTURE(preset);
        HTypeGroup g = HTypeGroup::from_preset(preset);
        double beta = 0.6;
        SpectralParam p{beta, 1.0, 1.0};  // residuals are relative, constants cancel
        double expo = g.rho() - beta;
        SField uk = [&, expo](const SPoint& x) {
            return cplx{std::pow(x.a, expo) * q_kernel(g, p, x.a, x.n), 0.0};
        };
        CHECK(eigen_residual(g, beta, uk, sample_points(g, 5, 31), scheme) < 1e-3);
    }
}

TEST_CASE("harmonic residual is the shifted-operator counterpart") {
    // v = a^{beta - rho} u with u = a^{rho - beta} is constant: L^beta v = 0
    HTypeGroup g = HTypeGroup::heisenberg(1);
    double beta = 0.8;
    double expo = g.rho() - beta;
    SField u = [expo](const SPoint& x) { return cplx{std::pow(x.a, expo), 0.0}; };
    auto pts = sample_points(g, 4, 37);
    CHECK(harmonic_residual(g, beta, u, pts, FdScheme{}) < 1e-8);

    // on the degenerate boundary with Q = 1 the dual power works as well
    HTypeGroup ab = HTypeGroup::abelian(1);
    double expo2 = ab.rho() + beta;
    SField u2 = [expo2](const SPoint& x) { return cplx{std::pow(x.a, expo2), 0.0}; };
    CHECK(harmonic_residual(ab, beta, u2, sample_points(ab, 4, 41), FdScheme{}) < 1e-8);
}

TEST_CASE("accuracy is uniform across scales") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    FdScheme scheme;
    double rho = g.rho(), beta = 1.5;
    SField u = [=](const SPoint& x) { return cplx{std::pow(x.a, rho + beta), 0.0}; };
    for (double a : {1e-3, 1e-1, 1.0, 1e2}) {
        CAPTURE(a);
        SPoint x{{{0.3, -0.4}, {0.2}}, a};
        cplx lu = apply_L(g, u, x, scheme);
        double expect = (beta * beta - rho * rho) * std::pow(a, rho + beta);
        CHECK(lu.real() == doctest::Approx(expect).epsilon(1e-7));
    }
}

TEST_CASE("scheme validation") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    SField one = [](const SPoint&) { return cplx{1.0, 0.0}; };
    SPoint x{g.identity(), 1.0};
    FdScheme bad_order;
    bad_order.order = 3;
    CHECK_THROWS(apply_L(g, one, x, bad_order));
    FdScheme bad_step;
    bad_step.step = 0.5;
    CHECK_THROWS(apply_L(g, one, x, bad_step));
    CHECK_THROWS(apply_L(g, one, SPoint{g.identity(), 0.0}, FdScheme{}));

    FdScheme second;
    second.order = 2;
    second.step = 1e-4;
    SField u = [](const SPoint& p) { return cplx{p.a * p.a, 0.0}; };
    cplx lu = apply_L(g, u, x, second);
    CHECK(lu.real() == doctest::Approx(4.0 - 2.0 * 2.0 * 1.0).epsilon(1e-5));  // (s^2 - Qs) a^s
}
