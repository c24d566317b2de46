#include "narlab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "narlab/parallel.hpp"
#include "narlab/rng.hpp"

namespace narlab {

namespace {

constexpr std::int64_t kMcChunk = 8192;

// Draw m from the normalized a = 1 kernel. The radial marginals are exact:
// with w = (t^2/4)/(1 + t^2/4) for t = ||X|| and v = s^2/(A^2 + s^2) for
// s = ||Z||, A = 1 + t^2/4, the density t^{2p-1} s^{k-1} ((1+t^2/4)^2+s^2)^{-sigma}
// factors into w ~ Beta(p, 2 sigma - k - p) and v ~ Beta(k/2, sigma - k/2).
// Abelian boundary: (1 + t^2)^{-sigma} gives w = t^2/(1+t^2) ~ Beta(d/2, beta).
NPoint sample_kernel_point(const HTypeGroup& g, double sigma, CounterRng& rng) {
    NPoint m;
    const int dv = g.dim_v();
    const int k = g.k();
    if (g.abelian_boundary()) {
        double w = rng.next_beta(0.5 * dv, sigma - 0.5 * dv);
        double t = std::sqrt(w / (1.0 - w));
        m.X = rng.unit_vector(dv);
        for (double& c : m.X) c *= t;
        return m;
    }
    double p = 0.5 * dv;
    double w = rng.next_beta(p, 2.0 * sigma - k - p);
    double t = 2.0 * std::sqrt(w / (1.0 - w));
    m.X = rng.unit_vector(dv);
    for (double& c : m.X) c *= t;
    double A = 1.0 + 0.25 * t * t;
    double v = rng.next_beta(0.5 * k, sigma - 0.5 * k);
    double s = A * std::sqrt(v / (1.0 - v));
    m.Z = rng.unit_vector(k);
    for (double& c : m.Z) c *= s;
    return m;
}

// Deterministic complex Monte Carlo mean: per-sample counter streams, chunk
// partials summed in index order (bitwise identical for any worker count).
struct McMean {
    cplx mean{0.0, 0.0};
    double std_error = 0.0;
};

McMean mc_mean(std::int64_t total, const std::function<cplx(std::int64_t)>& sample) {
    std::int64_t chunks = (total + kMcChunk - 1) / kMcChunk;
    std::vector<double> sum_re(chunks, 0.0), sum_im(chunks, 0.0), sum_abs2(chunks, 0.0);
    parallel_for(chunks, [&](std::int64_t c) {
        std::int64_t i0 = c * kMcChunk, i1 = std::min(total, i0 + kMcChunk);
        double re = 0.0, im = 0.0, a2 = 0.0;
        for (std::int64_t i = i0; i < i1; ++i) {
            cplx v = sample(i);
            re += v.real();
            im += v.imag();
            a2 += std::norm(v);
        }
        sum_re[c] = re;
        sum_im[c] = im;
        sum_abs2[c] = a2;
    });
    double re = 0.0, im = 0.0, a2 = 0.0;
    for (std::int64_t c = 0; c < chunks; ++c) {
        re += sum_re[c];
        im += sum_im[c];
        a2 += sum_abs2[c];
    }
    McMean out;
    double n = static_cast<double>(total);
    out.mean = {re / n, im / n};
    double var = std::max(0.0, a2 / n - std::norm(out.mean));
    out.std_error = std::sqrt(var / n);
    return out;
}

// integral of f(x delta_a(m^{-1})) q_1(m) dm over N, one density component
TransformResult density_q_transform(const HTypeGroup& g, const SpectralParam& param,
                                    const BoundaryMeasure& densities_only, const SPoint& x,
                                    const QuadratureSpec& quad) {
    const int dv = g.dim_v();
    const int k = g.k();
    const int dim = dv + k;
    const double sigma = g.rho() + param.beta;
    TransformResult out;
    if (quad.engine == QuadratureSpec::Engine::adaptive_tensor) {
        BoxIntegrand f = [&](const double* y, int) -> cplx {
            NPoint m;
            m.X.assign(y, y + dv);
            m.Z.assign(y + dv, y + dv + k);
            double q1 = param.c_beta * std::exp(-sigma * log_kernel_denominator(g, 1.0, m));
            if (q1 == 0.0) return {0.0, 0.0};
            NPoint n1 = g.multiply(x.n, g.dilate(x.a, g.inverse(m)));
            return density_value(densities_only, n1) * q1;
        };
        IntegralResult r = integrate_rd(f, dim, quad, 2.0);
        out.value = r.value;
        out.error = r.error;
        out.evals = r.evals;
        if (!r.converged)
            throw QuadratureError("q_transform density quadrature did not converge");
        return out;
    }
    std::int64_t samples = std::min<std::int64_t>(quad.max_evals, 1000000);
    samples = std::max<std::int64_t>(samples, 1024);
    std::uint64_t seed = quad.seed;
    McMean m = mc_mean(samples, [&](std::int64_t i) -> cplx {
        CounterRng rng(seed, 0x71747231u ^ static_cast<std::uint64_t>(i));
        NPoint mp = sample_kernel_point(g, sigma, rng);
        NPoint n1 = g.multiply(x.n, g.dilate(x.a, g.inverse(mp)));
        return density_value(densities_only, n1);
    });
    out.value = m.mean;
    out.error = m.std_error;
    out.evals = samples;
    return out;
}

// membership weight: the kernel shape at a = 1, relaxed by the quasi-norm constant
double membership_weight(const HTypeGroup& g, double sigma, double tau, const NPoint& n) {
    double d = g.hnorm(n);
    return std::pow(16.0 + d * d / (4.0 * tau * tau), -sigma);
}

}  // namespace

TransformResult q_transform(const HTypeGroup& g, const SpectralParam& param,
                            const BoundaryMeasure& mu, const SPoint& x,
                            const QuadratureSpec& quad) {
    quad.validate();
    g.check_point(x.n);
    if (!(x.a > 0.0)) throw std::invalid_argument("q_transform requires a > 0");
    TransformResult out;
    for (const auto& [loc, w] : mu.atoms) {
        NPoint rel = g.multiply(g.inverse(loc), x.n);
        out.value += w * q_kernel(g, param, x.a, rel);
    }
    if (mu.has_density()) {
        BoundaryMeasure dens;
        dens.densities = mu.densities;
        TransformResult d = density_q_transform(g, param, dens, x, quad);
        out.value += d.value;
        out.error += d.error;
        out.evals += d.evals;
    }
    return out;
}

TransformResult p_transform(const HTypeGroup& g, const SpectralParam& param,
                            const BoundaryMeasure& mu, const SPoint& x,
                            const QuadratureSpec& quad) {
    TransformResult r = q_transform(g, param, mu, x, quad);
    double pref = std::exp((g.rho() - param.beta) * std::log(x.a));
    r.value *= pref;
    r.error *= pref;
    return r;
}

std::pair<bool, double> finiteness_check(const HTypeGroup& g, const SpectralParam& param,
                                         const BoundaryMeasure& mu, double tau,
                                         const QuadratureSpec& quad) {
    quad.validate();
    if (!(tau >= 1.0)) throw std::invalid_argument("finiteness_check requires tau >= 1");
    const double sigma = g.rho() + param.beta;
    double total = 0.0;
    for (const auto& [loc, w] : mu.atoms) total += std::abs(w) * membership_weight(g, sigma, tau, loc);
    if (!mu.has_density()) return {true, total};

    BoundaryMeasure abs_mu = abs_measure(mu);
    const int dv = g.dim_v();
    const int k = g.k();
    const int dim = dv + k;

    // core ball B(0, R0) by adaptive quadrature over its bounding box
    const double R0 = 2.0;
    std::vector<double> lo(dim), hi(dim);
    double hx = g.abelian_boundary() ? R0 : std::sqrt(R0);
    for (int i = 0; i < dv; ++i) {
        lo[i] = -hx;
        hi[i] = hx;
    }
    for (int i = 0; i < k; ++i) {
        lo[dv + i] = -0.25 * R0;
        hi[dv + i] = 0.25 * R0;
    }
    BoxIntegrand core = [&](const double* y, int) -> cplx {
        NPoint n;
        n.X.assign(y, y + dv);
        n.Z.assign(y + dv, y + dv + k);
        if (g.hnorm(n) >= R0) return {0.0, 0.0};
        return {std::abs(density_value(abs_mu, n)) * membership_weight(g, sigma, tau, n), 0.0};
    };
    QuadratureSpec core_quad = quad;
    core_quad.rel_tol = std::max(quad.rel_tol, 1e-4);
    IntegralResult core_r = integrate_box(core, lo, hi, core_quad);
    total += core_r.value.real();

    // dyadic shells R0 2^j <= d < R0 2^{j+1}: seeded Monte Carlo over the
    // outer bounding box, then geometric extrapolation of the shell sums
    const int shells = 12;
    const std::int64_t per_shell = 100000;
    std::vector<double> shell_sum(shells, 0.0);
    for (int j = 0; j < shells; ++j) {
        double r_in = R0 * std::pow(2.0, j);
        double r_out = 2.0 * r_in;
        double bx = g.abelian_boundary() ? r_out : std::sqrt(r_out);
        double bz = 0.25 * r_out;
        double box_vol = std::pow(2.0 * bx, dv) * (k > 0 ? std::pow(2.0 * bz, k) : 1.0);
        std::uint64_t seed = quad.seed;
        McMean m = mc_mean(per_shell, [&](std::int64_t i) -> cplx {
            CounterRng rng(seed, 0x73686c00u + static_cast<std::uint64_t>(j) * 0x100000ull +
                                     static_cast<std::uint64_t>(i));
            NPoint n;
            n.X.resize(dv);
            n.Z.resize(k);
            for (int c = 0; c < dv; ++c) n.X[c] = bx * (2.0 * rng.next_double() - 1.0);
            for (int c = 0; c < k; ++c) n.Z[c] = bz * (2.0 * rng.next_double() - 1.0);
            double d = g.hnorm(n);
            if (d < r_in || d >= r_out) return {0.0, 0.0};
            return {std::abs(density_value(abs_mu, n)) * membership_weight(g, sigma, tau, n), 0.0};
        });
        shell_sum[j] = box_vol * m.mean.real();
    }
    for (int j = 0; j < shells; ++j) total += shell_sum[j];

    // decide convergence from the last few dyadic ratios
    double q = 0.0;
    int ratios = 0;
    for (int j = shells - 4; j + 1 < shells; ++j) {
        if (shell_sum[j] > 0.0 && shell_sum[j + 1] > 0.0) {
            q = std::max(q, shell_sum[j + 1] / shell_sum[j]);
            ++ratios;
        }
    }
    if (ratios == 0) return {true, total};  // tail already vanished (compact support)
    if (q >= 0.9) return {false, total};
    total += shell_sum[shells - 1] * q / (1.0 - q);
    return {true, total};
}

double tail_integral(const HTypeGroup& g, const SpectralParam& param, const BoundaryMeasure& mu,
                     double delta, const SPoint& x, const QuadratureSpec& quad) {
    quad.validate();
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("tail_integral requires 0 < delta < 1");
    double tau = g.estimate_tau();
    if (g.hnorm(x.n) >= delta * delta / (2.0 * tau))
        throw std::invalid_argument("tail_integral requires x.n in B(0, delta^2/(2 tau))");
    double total = 0.0;
    for (const auto& [loc, w] : mu.atoms) {
        if (g.hnorm(loc) < delta) continue;
        NPoint rel = g.multiply(g.inverse(loc), x.n);
        total += std::abs(w) * q_kernel(g, param, x.a, rel);
    }
    if (!mu.has_density()) return total;
    BoundaryMeasure abs_mu = abs_measure(mu);
    const int dv = g.dim_v();
    const int k = g.k();
    const int dim = dv + k;
    BoxIntegrand f = [&](const double* y, int) -> cplx {
        NPoint n1;
        n1.X.assign(y, y + dv);
        n1.Z.assign(y + dv, y + dv + k);
        if (g.hnorm(n1) < delta) return {0.0, 0.0};
        double w = std::abs(density_value(abs_mu, n1));
        if (w == 0.0) return {0.0, 0.0};
        NPoint rel = g.multiply(g.inverse(n1), x.n);
        return {w * q_kernel(g, param, x.a, rel), 0.0};
    };
    QuadratureSpec tq = quad;
    tq.rel_tol = std::max(quad.rel_tol, 1e-4);
    IntegralResult r = integrate_rd(f, dim, tq, 2.0);
    return total + r.value.real();
}

double hl_lower_constant(const HTypeGroup& g, const SpectralParam& param, double alpha,
                         double tau) {
    if (!(alpha > 0.0)) throw std::invalid_argument("hl_lower_constant requires alpha > 0");
    if (!(tau >= 1.0)) throw std::invalid_argument("hl_lower_constant requires tau >= 1");
    double c_alpha = 1.0 + std::sqrt(2.0) * alpha;
    double sigma = g.rho() + param.beta;
    double denom = 16.0 + 8.0 * c_alpha * tau + c_alpha * c_alpha * tau * tau;
    return param.c_beta * g.unit_ball_volume() * std::pow(denom, -sigma);
}

HlReport verify_hl(const HTypeGroup& g, const SpectralParam& param, const BoundaryMeasure& mu,
                   const NPoint& n0, const std::vector<HlSample>& samples,
                   const QuadratureSpec& quad) {
    HlReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    double tau = g.estimate_tau();
    double V = g.unit_ball_volume();
    BoundaryMeasure abs_mu = abs_measure(mu);
    for (const auto& s : samples) {
        double C = hl_lower_constant(g, param, s.alpha, tau);
        BallMassResult mass = ball_mass_abs(g, mu, n0, s.a, quad);
        double lhs = C * mass.value.real() / (std::pow(s.a, g.Q()) * V);
        double rhs = q_transform(g, param, abs_mu, s.point, quad).value.real();
        double margin = rhs - lhs;
        ++rep.checked;
        if (margin < 0.0) ++rep.violations;
        rep.min_margin = std::min(rep.min_margin, margin);
        double qv = std::abs(q_transform(g, param, mu, s.point, quad).value);
        rep.part_b_sup = std::max(rep.part_b_sup, qv);
    }
    MaximalResult mr = maximal_function(g, mu, n0, log_grid(1e-3, 10.0, 25), quad);
    rep.maximal_value = mr.value;
    rep.maximal_infinite = mr.infinite;
    if (!mr.infinite && mr.value > 0.0) rep.part_b_ratio = rep.part_b_sup / mr.value;
    return rep;
}

std::pair<bool, double> check_H3(const HTypeGroup& g, const SpectralParam& param,
                                 const BoundaryMeasure& mu, const NPoint& n0,
                                 const std::vector<SPoint>& neighborhood_sample,
                                 const QuadratureSpec& quad) {
    g.check_point(n0);
    BoundaryMeasure abs_mu = abs_measure(mu);
    std::vector<double> as, defects;
    double sup = 0.0;
    for (const auto& x : neighborhood_sample) {
        double pos = q_transform(g, param, abs_mu, x, quad).value.real();
        double mag = std::abs(q_transform(g, param, mu, x, quad).value);
        double defect = std::max(0.0, pos - mag);
        sup = std::max(sup, defect);
        as.push_back(x.a);
        defects.push_back(defect);
    }
    if (defects.empty()) return {true, 0.0};
    // unbounded only if the defect blows up as a -> 0: compare the smallest-a
    // decade with the rest of the sample
    std::vector<size_t> order(as.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return as[i] < as[j]; });
    double a_min = as[order.front()];
    double small = 0.0, rest = 0.0;
    for (size_t i : order) {
        if (as[i] <= 10.0 * a_min)
            small = std::max(small, defects[i]);
        else
            rest = std::max(rest, defects[i]);
    }
    bool bounded = !(rest > 0.0 && small >= 16.0 * rest) && !(rest == 0.0 && small > 1e6);
    return {bounded, sup};
}

}  // namespace narlab
