#include "narlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "narlab/parallel.hpp"
#include "narlab/rng.hpp"

namespace narlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> normalized(std::vector<double> v) {
    double n = std::sqrt(dot(v, v));
    if (n == 0.0) throw std::invalid_argument("zero direction vector");
    for (double& c : v) c /= n;
    return v;
}

// unit vector in the cap {<u, center> > cos(radius)}: rotate the center by a
// random angle phi <= radius towards a random orthogonal direction
std::vector<double> sample_cap(CounterRng& rng, const Cap& cap, int dim) {
    std::vector<double> c = cap.center.empty() ? std::vector<double>(dim, 0.0) : cap.center;
    if (cap.center.empty()) c[0] = 1.0;
    if (static_cast<int>(c.size()) != dim) throw std::invalid_argument("cap center dimension mismatch");
    c = normalized(std::move(c));
    if (dim == 1) return c;  // S^0: the cap is its own center
    std::vector<double> w = rng.unit_vector(dim);
    double wc = dot(w, c);
    for (int i = 0; i < dim; ++i) w[i] -= wc * c[i];
    double wn = std::sqrt(dot(w, w));
    if (wn < 1e-12) return c;
    for (double& x : w) x /= wn;
    double phi = cap.angular_radius * std::pow(rng.next_open(), 1.0 / (dim - 1));
    std::vector<double> u(dim);
    for (int i = 0; i < dim; ++i) u[i] = std::cos(phi) * c[i] + std::sin(phi) * w[i];
    return u;
}

LimitEstimate combine_estimates(const std::vector<LimitEstimate>& parts, double tol) {
    LimitEstimate out;
    if (parts.empty()) return out;
    bool all_conv = true;
    cplx mean{0.0, 0.0};
    for (const auto& e : parts) {
        all_conv = all_conv && e.converged;
        mean += e.value;
        out.last_delta = std::max(out.last_delta, e.last_delta);
    }
    mean /= static_cast<double>(parts.size());
    double spread = 0.0;
    for (const auto& e : parts) spread = std::max(spread, std::abs(e.value - mean));
    out.value = mean;
    out.converged = all_conv && spread <= 2.0 * tol * std::max(1.0, std::abs(mean));
    out.last_delta = std::max(out.last_delta, spread);
    out.samples = parts.front().samples;
    return out;
}

}  // namespace

void Schedule::validate() const {
    if (!(a0 > 0.0)) throw std::invalid_argument("schedule.a0 must be positive");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("schedule.ratio must lie in (0,1)");
    if (steps < 3) throw std::invalid_argument("schedule.steps must be >= 3");
    if (!(tol > 0.0)) throw std::invalid_argument("schedule.tol must be positive");
}

SPoint ray_point(const HTypeGroup& g, const Ray& ray, double a) {
    g.check_point(ray.n0);
    if (!(a > 0.0)) throw std::invalid_argument("ray_point requires a > 0");
    if (!(ray.alpha > 0.0)) throw std::invalid_argument("ray aperture must be positive");
    const int dv = g.dim_v();
    const int k = g.k();
    if (static_cast<int>(ray.omega.size()) != dv)
        throw std::invalid_argument("ray omega dimension mismatch");
    NPoint offset;
    offset.X.assign(dv, 0.0);
    offset.Z.assign(k, 0.0);
    if (g.abelian_boundary()) {
        double s = std::cos(ray.theta) >= 0.0 ? 1.0 : -1.0;
        for (int i = 0; i < dv; ++i) offset.X[i] = ray.alpha * a * s * ray.omega[i];
    } else {
        if (static_cast<int>(ray.zeta.size()) != k)
            throw std::invalid_argument("ray zeta dimension mismatch");
        double rx = std::sqrt(ray.alpha * a * std::abs(std::cos(ray.theta)));
        double rz = 0.25 * ray.alpha * a * std::abs(std::sin(ray.theta));
        for (int i = 0; i < dv; ++i) offset.X[i] = rx * ray.omega[i];
        for (int r = 0; r < k; ++r) offset.Z[r] = rz * ray.zeta[r];
    }
    SPoint p;
    p.n = g.multiply(ray.n0, offset);
    p.a = a;
    return p;
}

bool in_admissible(const HTypeGroup& g, const AdmissibleDomain& dom, const SPoint& x) {
    return g.quasi_dist(dom.n0, x.n) < dom.alpha * x.a;
}

LimitEstimate limit_along_ray(const HTypeGroup& g, const SField& F, const Ray& ray,
                              const Schedule& schedule) {
    schedule.validate();
    std::vector<std::pair<double, cplx>> samples(schedule.steps);
    parallel_for(schedule.steps, [&](std::int64_t j) {
        double a = schedule.a0 * std::pow(schedule.ratio, static_cast<double>(j));
        samples[j] = {a, F(ray_point(g, ray, a))};
    });
    return estimate_limit_from_samples(std::move(samples), schedule.tol);
}

Ray sample_sector_ray(const HTypeGroup& g, const Sector& sector, std::uint64_t seed, int index) {
    CounterRng rng(seed, 0x73726179u + static_cast<std::uint64_t>(index));
    Ray ray;
    ray.n0 = sector.n0;
    ray.alpha = sector.alpha;
    ray.omega = sample_cap(rng, sector.cap1, g.dim_v());
    if (!g.abelian_boundary()) ray.zeta = sample_cap(rng, sector.cap2, g.k());
    double lo = sector.theta_lo, hi = sector.theta_hi;
    if (!(hi > lo)) throw std::invalid_argument("sector theta interval is empty");
    ray.theta = lo + (hi - lo) * rng.next_double();
    return ray;
}

LimitEstimate sectorial_limit(const HTypeGroup& g, const SField& F, const Sector& sector,
                              int ray_sample_count, std::uint64_t seed,
                              const Schedule& schedule) {
    if (ray_sample_count < 1) throw std::invalid_argument("ray_sample_count must be >= 1");
    std::vector<LimitEstimate> per_ray(ray_sample_count);
    for (int i = 0; i < ray_sample_count; ++i) {
        Ray ray = sample_sector_ray(g, sector, seed, i);
        per_ray[i] = limit_along_ray(g, F, ray, schedule);
    }
    return combine_estimates(per_ray, schedule.tol);
}

LimitEstimate admissible_scan(const HTypeGroup& g, const SField& F, const NPoint& n0,
                              const std::vector<double>& apertures, int sequence_count,
                              std::uint64_t seed, const Schedule& schedule) {
    if (apertures.empty()) throw std::invalid_argument("admissible_scan needs apertures");
    if (sequence_count < 2) throw std::invalid_argument("sequence_count must be >= 2");
    schedule.validate();
    std::vector<LimitEstimate> parts;
    for (size_t ai = 0; ai < apertures.size(); ++ai) {
        double alpha = apertures[ai];
        if (!(alpha > 0.0)) throw std::invalid_argument("apertures must be positive");
        for (int s = 0; s < sequence_count; ++s) {
            CounterRng rng(seed, 0x61647363u + 257 * ai + static_cast<std::uint64_t>(s));
            if (s == 0) {
                // axial sequence n = n0
                std::vector<std::pair<double, cplx>> samples(schedule.steps);
                parallel_for(schedule.steps, [&](std::int64_t j) {
                    double a = schedule.a0 * std::pow(schedule.ratio, static_cast<double>(j));
                    samples[j] = {a, F({n0, a})};
                });
                parts.push_back(estimate_limit_from_samples(std::move(samples), schedule.tol));
                continue;
            }
            // in-cone sequence at depth fraction c: boundary-hugging for s = 1
            double c = s == 1 ? 0.99 : 0.05 + 0.9 * rng.next_double();
            Ray ray;
            ray.n0 = n0;
            ray.alpha = c * alpha;
            ray.omega = rng.unit_vector(g.dim_v());
            if (!g.abelian_boundary()) ray.zeta = rng.unit_vector(g.k());
            ray.theta = kTwoPi * rng.next_double();
            parts.push_back(limit_along_ray(g, F, ray, schedule));
        }
    }
    return combine_estimates(parts, schedule.tol);
}

std::vector<TraceRow> trace_rays(const HTypeGroup& g, const SField& F, const Sector& sector,
                                 int ray_sample_count, std::uint64_t seed,
                                 const Schedule& schedule) {
    schedule.validate();
    std::vector<TraceRow> rows;
    for (int i = 0; i < ray_sample_count; ++i) {
        Ray ray = sample_sector_ray(g, sector, seed, i);
        std::vector<TraceRow> ray_rows(schedule.steps);
        parallel_for(schedule.steps, [&](std::int64_t j) {
            double a = schedule.a0 * std::pow(schedule.ratio, static_cast<double>(j));
            ray_rows[j] = {i, ray.theta, a, F(ray_point(g, ray, a))};
        });
        rows.insert(rows.end(), ray_rows.begin(), ray_rows.end());
    }
    return rows;
}

FatouReport fatou_experiment(const HTypeGroup& g, const SpectralParam& param,
                             const BoundaryMeasure& mu, const NPoint& n0,
                             const FatouConfig& config, const QuadratureSpec& quad) {
    FatouReport rep;
    SField F = [&](const SPoint& x) { return q_transform(g, param, mu, x, quad).value; };

    try {
        auto [ok, sup] = check_H1(g, mu, n0, config.h1_t0,
                                  log_grid(1e-3 * config.h1_t0, 0.99 * config.h1_t0, 16), quad);
        rep.h1 = ok;
        rep.h1_sup = sup;
        if (!ok) rep.failures.push_back("H1: ball-mass ratio unbounded near n0");
    } catch (const std::exception& e) {
        rep.failures.push_back(std::string("H1: ") + e.what());
    }

    Sector sector = config.sector;
    sector.n0 = n0;
    try {
        rep.sectorial =
            sectorial_limit(g, F, sector, config.ray_sample_count, config.seed, config.schedule);
        if (!rep.sectorial.converged) rep.failures.push_back("sectorial limit did not converge");
    } catch (const std::exception& e) {
        rep.failures.push_back(std::string("sectorial: ") + e.what());
    }

    try {
        rep.admissible = admissible_scan(g, F, n0, config.apertures, config.sequence_count,
                                         config.seed, config.schedule);
        if (!rep.admissible.converged) rep.failures.push_back("admissible scan did not converge");
    } catch (const std::exception& e) {
        rep.failures.push_back(std::string("admissible: ") + e.what());
    }

    try {
        std::vector<double> r_schedule(config.schedule.steps);
        for (int j = 0; j < config.schedule.steps; ++j)
            r_schedule[j] = config.schedule.a0 * std::pow(config.schedule.ratio, j);
        rep.strong_deriv = strong_derivative(g, mu, n0, default_ball_family(g, config.seed),
                                             r_schedule, config.schedule.tol, quad);
        if (!rep.strong_deriv.converged)
            rep.failures.push_back("strong derivative did not converge");
    } catch (const std::exception& e) {
        rep.failures.push_back(std::string("strong_derivative: ") + e.what());
    }

    if (!rep.failures.empty()) {
        rep.verdict = "inconclusive";
        return rep;
    }
    cplx vals[3] = {rep.sectorial.value, rep.admissible.value, rep.strong_deriv.value};
    cplx mean = (vals[0] + vals[1] + vals[2]) / 3.0;
    double spread = 0.0;
    for (const cplx& v : vals) spread = std::max(spread, std::abs(v - mean));
    rep.verdict = spread <= config.consistency_tol * std::max(1.0, std::abs(mean))
                      ? "consistent"
                      : "inconsistent";
    return rep;
}

}  // namespace narlab
