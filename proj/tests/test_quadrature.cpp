#include <cmath>

#include "doctest.h"
#include "narlab/quadrature.hpp"

using namespace narlab;

namespace {

const double pi = 3.14159265358979323846;

QuadratureSpec tight() {
    QuadratureSpec q;
    q.rel_tol = 1e-10;
    q.abs_tol = 1e-14;
    return q;
}

}  // namespace

TEST_CASE("1-D polynomial and exponential integrals") {
    auto f1 = [](const double* x, int) { return std::complex<double>{x[0] * x[0], 0.0}; };
    auto r = integrate_box(f1, {0.0}, {1.0}, tight());
    CHECK(r.converged);
    CHECK(r.value.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    auto f2 = [](const double* x, int) { return std::complex<double>{std::exp(x[0]), 0.0}; };
    r = integrate_box(f2, {-1.0}, {2.0}, tight());
    CHECK(r.value.real() == doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-12));

    // oscillatory integrand forces subdivision
    auto f3 = [](const double* x, int) { return std::complex<double>{std::sin(40.0 * x[0]), 0.0}; };
    r = integrate_box(f3, {0.0}, {1.0}, tight());
    CHECK(r.converged);
    CHECK(r.value.real() == doctest::Approx((1.0 - std::cos(40.0)) / 40.0).epsilon(1e-10));
}

TEST_CASE("multidimensional box integrals") {
    // separable cubic over [0,1]^2: (1/4)^2 * 16 = 1 with f = 4 x^3 * 4 y^3
    auto f = [](const double* x, int) {
        return std::complex<double>{16.0 * x[0] * x[0] * x[0] * x[1] * x[1] * x[1], 0.0};
    };
    auto r = integrate_box(f, {0.0, 0.0}, {1.0, 1.0}, tight());
    CHECK(r.converged);
    CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-10));

    // 3-D Gaussian against the erf closed form
    auto g = [](const double* x, int) {
        return std::complex<double>{std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])), 0.0};
    };
    QuadratureSpec q = tight();
    q.rel_tol = 1e-8;
    auto r3 = integrate_box(g, {-3.0, -3.0, -3.0}, {3.0, 3.0, 3.0}, q);
    double one_d = std::sqrt(pi) * std::erf(3.0);
    CHECK(r3.converged);
    CHECK(r3.value.real() == doctest::Approx(one_d * one_d * one_d).epsilon(1e-7));
}

TEST_CASE("complex-valued integrands") {
    auto f = [](const double* x, int) {
        return std::complex<double>{std::cos(x[0]), std::sin(x[0])};
    };
    auto r = integrate_box(f, {0.0}, {pi / 2.0}, tight());
    CHECK(r.value.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.value.imag() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrals over all of R^d via the rational map") {
    QuadratureSpec q = tight();
    q.rel_tol = 1e-9;

    auto g1 = [](const double* x, int) { return std::complex<double>{std::exp(-x[0] * x[0]), 0.0}; };
    auto r1 = integrate_rd(g1, 1, q);
    CHECK(r1.value.real() == doctest::Approx(std::sqrt(pi)).epsilon(1e-8));

    auto g2 = [](const double* x, int) {
        return std::complex<double>{std::exp(-(x[0] * x[0] + x[1] * x[1])), 0.0};
    };
    auto r2 = integrate_rd(g2, 2, q);
    CHECK(r2.value.real() == doctest::Approx(pi).epsilon(1e-8));

    // heavy polynomial tail (the kernel shape): int (1+x^2)^{-1} = pi
    auto h = [](const double* x, int) {
        return std::complex<double>{1.0 / (1.0 + x[0] * x[0]), 0.0};
    };
    auto rh = integrate_rd(h, 1, q);
    CHECK(rh.value.real() == doctest::Approx(pi).epsilon(1e-8));

    // 2-D heavy tail: int (1+x^2+y^2)^{-2} = pi
    auto h2 = [](const double* x, int) {
        double d = 1.0 + x[0] * x[0] + x[1] * x[1];
        return std::complex<double>{1.0 / (d * d), 0.0};
    };
    auto rh2 = integrate_rd(h2, 2, q);
    CHECK(rh2.value.real() == doctest::Approx(pi).epsilon(1e-7));
}

TEST_CASE("semi-infinite and reflected intervals") {
    QuadratureSpec q = tight();
    double inf = std::numeric_limits<double>::infinity();
    auto f = [](double x) { return std::complex<double>{std::exp(-x), 0.0}; };
    CHECK(integrate_interval(f, 0.0, inf, q).value.real() == doctest::Approx(1.0).epsilon(1e-9));
    auto g = [](double x) { return std::complex<double>{std::exp(x), 0.0}; };
    CHECK(integrate_interval(g, -inf, 0.0, q).value.real() == doctest::Approx(1.0).epsilon(1e-9));
    auto h = [](double x) { return std::complex<double>{1.0 / (1.0 + x * x), 0.0}; };
    CHECK(integrate_interval(h, -inf, inf, q).value.real() == doctest::Approx(pi).epsilon(1e-9));
}

TEST_CASE("error estimates and convergence reporting") {
    QuadratureSpec q;
    q.rel_tol = 1e-10;
    q.abs_tol = 1e-14;
    auto f = [](const double* x, int) {
        return std::complex<double>{std::sin(200.0 * x[0]) / (0.01 + x[0] * x[0]), 0.0};
    };
    QuadratureSpec qv = q;
    qv.max_evals = 50;
    CHECK_THROWS(qv.validate());  // too small a budget is rejected outright
    q.max_evals = 4000;  // accepted, but far too small for this integrand
    auto r = integrate_box(f, {0.0, 0.0}, {1.0, 1.0}, q);
    CHECK_FALSE(r.converged);
    CHECK(r.error > 0.0);
}

TEST_CASE("deterministic results run to run") {
    QuadratureSpec q = tight();
    auto f = [](const double* x, int) {
        return std::complex<double>{std::exp(-std::abs(x[0])) * std::cos(3.0 * x[0] + x[1]), 0.0};
    };
    auto a = integrate_box(f, {-2.0, 0.0}, {2.0, 1.0}, q);
    auto b = integrate_box(f, {-2.0, 0.0}, {2.0, 1.0}, q);
    CHECK(a.value.real() == b.value.real());  // bitwise
    CHECK(a.evals == b.evals);
}

TEST_CASE("engine name round trip") {
    CHECK(QuadratureSpec::engine_from_string("adaptive_tensor") ==
          QuadratureSpec::Engine::adaptive_tensor);
    CHECK(QuadratureSpec::engine_from_string("monte_carlo") == QuadratureSpec::Engine::monte_carlo);
    CHECK_THROWS(QuadratureSpec::engine_from_string("simpson"));
}
