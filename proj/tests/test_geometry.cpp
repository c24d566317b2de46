#include <cmath>

#include "doctest.h"
#include "narlab/geometry.hpp"

using namespace narlab;

namespace {

const double pi = 3.14159265358979323846;

double quasi_dist(const HTypeGroup& g, const NPoint& a, const NPoint& b) {
    return g.hnorm(g.multiply(g.inverse(a), b));
}

Sector default_sector(const HTypeGroup& g, double alpha) {
    Sector s;
    s.n0 = g.identity();
    s.alpha = alpha;
    s.cap1.center.assign(g.dim_v(), 0.0);
    s.cap1.center[0] = 1.0;
    if (g.k() > 0) {
        s.cap2.center.assign(g.k(), 0.0);
        s.cap2.center[0] = 1.0;
    }
    return s;
}

}  // namespace

TEST_CASE("ray points sit exactly on the cone boundary") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    Ray ray;
    ray.n0 = NPoint{{0.4, -0.2}, {0.3}};
    ray.alpha = 1.5;
    ray.omega = {0.6, 0.8};
    ray.zeta = {1.0};
    for (double theta : {0.0, 0.7, pi / 2.0, 2.5, 4.0}) {
        ray.theta = theta;
        for (double a : {1e-4, 0.1, 1.0, 30.0}) {
            CAPTURE(theta);
            CAPTURE(a);
            SPoint x = ray_point(g, ray, a);
            CHECK(x.a == a);
            CHECK(quasi_dist(g, ray.n0, x.n) ==
                  doctest::Approx(ray.alpha * a).epsilon(1e-12));
        }
    }

    HTypeGroup ab = HTypeGroup::abelian(2);
    Ray r2;
    r2.n0 = NPoint{{1.0, 2.0}, {}};
    r2.alpha = 0.7;
    r2.omega = {0.0, 1.0};
    r2.theta = 0.3;
    SPoint y = ray_point(ab, r2, 0.5);
    CHECK(quasi_dist(ab, r2.n0, y.n) == doctest::Approx(0.35).epsilon(1e-14));
}

TEST_CASE("admissible membership is strict") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    AdmissibleDomain dom{g.identity(), 1.0};
    Ray ray;
    ray.n0 = g.identity();
    ray.alpha = 1.0;
    ray.omega = {1.0, 0.0};
    ray.zeta = {1.0};
    ray.theta = 0.9;
    ray.alpha = 1.001;
    CHECK_FALSE(in_admissible(g, dom, ray_point(g, ray, 0.5)));  // just outside
    ray.alpha = 0.999;
    CHECK(in_admissible(g, dom, ray_point(g, ray, 0.5)));
    CHECK(in_admissible(g, dom, SPoint{g.identity(), 0.5}));
}

TEST_CASE("schedule validation") {
    Schedule s;
    CHECK_NOTHROW(s.validate());
    Schedule bad = s;
    bad.ratio = 1.0;
    CHECK_THROWS(bad.validate());
    bad = s;
    bad.a0 = 0.0;
    CHECK_THROWS(bad.validate());
    bad = s;
    bad.steps = 1;
    CHECK_THROWS(bad.validate());
    bad = s;
    bad.tol = 0.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("limits along a single ray") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    Ray ray;
    ray.n0 = g.identity();
    ray.alpha = 1.0;
    ray.omega = {1.0, 0.0};
    ray.zeta = {1.0};
    ray.theta = 0.4;
    Schedule sched;
    sched.steps = 28;
    sched.tol = 1e-3;

    // sqrt(a) converges geometrically but slowly; Aitken extrapolation of a
    // geometric sequence recovers the limit far beyond the raw sample accuracy
    SField f = [](const SPoint& x) { return cplx{3.0 + std::sqrt(x.a), -2.0 * x.a}; };
    auto e = limit_along_ray(g, f, ray, sched);
    CHECK(e.converged);
    CHECK(e.value.real() == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(e.value.imag() == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(e.samples.size() == 28);

    SField diverging = [](const SPoint& x) { return cplx{1.0 / x.a, 0.0}; };
    CHECK_FALSE(limit_along_ray(g, diverging, ray, sched).converged);
}

TEST_CASE("sector sampling respects the caps") {
    HTypeGroup g = HTypeGroup::heisenberg(3);
    Sector s = default_sector(g, 2.0);
    s.theta_lo = 1.0;
    s.theta_hi = 2.0;
    double cos_r1 = std::cos(s.cap1.angular_radius);
    for (int i = 0; i < 12; ++i) {
        Ray r = sample_sector_ray(g, s, 7, i);
        CHECK(r.alpha == 2.0);
        CHECK(r.theta >= 1.0);
        CHECK(r.theta <= 2.0);
        double n1 = 0.0, dot = 0.0;
        for (size_t j = 0; j < r.omega.size(); ++j) {
            n1 += r.omega[j] * r.omega[j];
            dot += r.omega[j] * s.cap1.center[j];
        }
        CHECK(n1 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dot >= cos_r1 - 1e-12);
        CHECK(r.zeta.size() == 1);  // k = 1: the cap is the single point {center}
    }
    // seeded draws are reproducible and distinct across indices
    Ray a0 = sample_sector_ray(g, s, 7, 0), a0b = sample_sector_ray(g, s, 7, 0);
    Ray a1 = sample_sector_ray(g, s, 7, 1);
    CHECK(a0.theta == a0b.theta);
    CHECK(a0.omega == a0b.omega);
    CHECK(a0.theta != a1.theta);
}

TEST_CASE("sectorial limit agrees across rays") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    Sector s = default_sector(g, 1.0);
    Schedule sched;
    sched.steps = 16;
    SField f = [](const SPoint& x) { return cplx{5.0 + x.a * x.a, 0.0}; };
    auto e = sectorial_limit(g, f, s, 6, 3, sched);
    CHECK(e.converged);
    CHECK(e.value.real() == doctest::Approx(5.0).epsilon(1e-3));

    // a field with direction-dependent boundary values must be flagged
    SField skewed = [&](const SPoint& x) {
        return cplx{x.n.X[0] > 0.0 ? 1.0 : 0.0, 0.0};
    };
    Sector wide = default_sector(g, 1.0);
    wide.cap1.angular_radius = pi;  // all of the sphere
    auto bad = sectorial_limit(g, skewed, wide, 8, 3, sched);
    CHECK_FALSE(bad.converged);
}

TEST_CASE("admissible scan") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    Schedule sched;
    sched.steps = 16;
    SField f = [](const SPoint& x) { return cplx{-1.5 + x.a, 0.0}; };
    auto e = admissible_scan(g, f, g.identity(), {0.5, 1.0, 2.0}, 3, 5, sched);
    CHECK(e.converged);
    CHECK(e.value.real() == doctest::Approx(-1.5).epsilon(1e-3));

    // normalized distance to the axis: different along different sequences
    SField depends_on_direction = [&](const SPoint& x) {
        return cplx{g.hnorm(x.n) / x.a, 0.0};
    };
    auto bad = admissible_scan(g, depends_on_direction, g.identity(), {0.5, 2.0}, 3, 5, sched);
    CHECK_FALSE(bad.converged);
}

TEST_CASE("ray traces enumerate the schedule") {
    HTypeGroup g = HTypeGroup::heisenberg(1);
    Sector s = default_sector(g, 1.0);
    Schedule sched;
    sched.a0 = 1.0;
    sched.ratio = 0.5;
    sched.steps = 5;
    SField f = [](const SPoint& x) { return cplx{x.a, 0.0}; };
    auto rows = trace_rays(g, f, s, 3, 1, sched);
    CHECK(rows.size() == 15);
    CHECK(rows[0].a == doctest::Approx(1.0));
    CHECK(rows[1].a == doctest::Approx(0.5));
    CHECK(rows[4].a == doctest::Approx(0.0625));
    for (const auto& r : rows) CHECK(r.value.real() == doctest::Approx(r.a));
}

TEST_CASE("fatou experiment on a degenerate boundary") {
    HTypeGroup g = HTypeGroup::abelian(1);
    QuadratureSpec quad;
    quad.rel_tol = 1e-4;
    SpectralParam p = calibrate(g, 0.5, quad);
    BoundaryMeasure haar = make_density_measure(g, "haar");

    FatouConfig cfg;
    cfg.sector.n0 = g.identity();
    cfg.sector.alpha = 1.0;
    cfg.sector.cap1.center = {1.0};
    cfg.schedule.a0 = 0.5;
    cfg.schedule.steps = 12;
    cfg.schedule.tol = 5e-3;
    cfg.ray_sample_count = 3;
    cfg.sequence_count = 2;
    cfg.consistency_tol = 0.02;

    FatouReport rep = fatou_experiment(g, p, haar, g.identity(), cfg, quad);
    CHECK(rep.h1);
    CHECK(rep.sectorial.converged);
    CHECK(rep.sectorial.value.real() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(rep.admissible.converged);
    CHECK(rep.strong_deriv.converged);
    CHECK(rep.strong_deriv.value.real() == doctest::Approx(1.0).epsilon(0.02));
    CHECK(rep.verdict == "consistent");
    CHECK(rep.failures.empty());
}
