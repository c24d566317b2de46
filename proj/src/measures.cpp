#include "narlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "narlab/parallel.hpp"
#include "narlab/rng.hpp"

namespace narlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_param(const std::string& name) {
    auto colon = name.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("density '" + name + "' requires a :parameter");
    double v = 0.0;
    try {
        v = std::stod(name.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("bad density parameter in '" + name + "'");
    }
    if (!(v > 0.0)) throw std::invalid_argument("density parameter must be positive in '" + name + "'");
    return v;
}

std::string known_densities_msg() {
    std::string s;
    for (const auto& n : registered_density_names()) {
        if (!s.empty()) s += ", ";
        s += n;
    }
    return s;
}

}  // namespace

std::vector<std::string> registered_density_names() {
    return {"haar", "indicator_ball:r", "outside_ball:r", "heaviside_x1", "gaussian:s"};
}

Density make_density(const HTypeGroup& g, const std::string& name, cplx weight) {
    Density d;
    d.name = name;
    if (name == "haar") {
        d.f = [weight](const NPoint&) { return weight; };
        d.support_radius = kInf;
        d.smooth = true;
        return d;
    }
    if (name == "heaviside_x1") {
        d.f = [weight](const NPoint& n) { return n.X[0] >= 0.0 ? weight : cplx{0.0, 0.0}; };
        d.support_radius = kInf;
        d.smooth = false;
        return d;
    }
    if (name.rfind("indicator_ball:", 0) == 0) {
        double r = parse_param(name);
        HTypeGroup gc = g;
        d.f = [weight, gc, r](const NPoint& n) {
            return gc.hnorm(n) < r ? weight : cplx{0.0, 0.0};
        };
        d.support_radius = r;
        d.smooth = false;
        return d;
    }
    if (name.rfind("outside_ball:", 0) == 0) {
        double r = parse_param(name);
        HTypeGroup gc = g;
        d.f = [weight, gc, r](const NPoint& n) {
            return gc.hnorm(n) >= r ? weight : cplx{0.0, 0.0};
        };
        d.support_radius = kInf;
        d.smooth = false;
        return d;
    }
    if (name.rfind("gaussian:", 0) == 0) {
        double s = parse_param(name);
        d.f = [weight, s](const NPoint& n) {
            double e2 = 0.0;
            for (double x : n.X) e2 += x * x;
            for (double z : n.Z) e2 += z * z;
            return weight * std::exp(-e2 / (2.0 * s * s));
        };
        d.support_radius = kInf;
        d.smooth = true;
        return d;
    }
    throw std::invalid_argument("unknown density '" + name + "' (registered: " +
                                known_densities_msg() + ")");
}

BoundaryMeasure make_density_measure(const HTypeGroup& g, const std::string& name, cplx weight) {
    BoundaryMeasure mu;
    mu.densities.push_back(make_density(g, name, weight));
    mu.description = name;
    return mu;
}

cplx density_value(const BoundaryMeasure& mu, const NPoint& n) {
    cplx v{0.0, 0.0};
    for (const auto& d : mu.densities) v += d.f(n);
    return v;
}

BoundaryMeasure abs_measure(const BoundaryMeasure& mu) {
    BoundaryMeasure out;
    out.description = "|" + mu.description + "|";
    for (const auto& [n, w] : mu.atoms) out.atoms.emplace_back(n, cplx{std::abs(w), 0.0});
    if (!mu.densities.empty()) {
        Density d;
        d.name = "abs";
        double sup = 0.0;
        bool single = mu.densities.size() == 1;
        for (const auto& di : mu.densities) sup = std::max(sup, di.support_radius);
        d.support_radius = sup;
        d.smooth = single && mu.densities.front().smooth;
        std::vector<Density> parts = mu.densities;
        d.f = [parts](const NPoint& n) {
            cplx v{0.0, 0.0};
            for (const auto& p : parts) v += p.f(n);
            return cplx{std::abs(v), 0.0};
        };
        out.densities.push_back(std::move(d));
    }
    return out;
}

BoundaryMeasure translate_measure(const HTypeGroup& g, const NPoint& n0,
                                  const BoundaryMeasure& mu) {
    BoundaryMeasure out;
    out.description = "translated " + mu.description;
    for (const auto& [n, w] : mu.atoms) out.atoms.emplace_back(g.multiply(n0, n), w);
    NPoint n0_inv = g.inverse(n0);
    HTypeGroup gc = g;
    for (const auto& d : mu.densities) {
        Density t = d;
        auto base = d.f;
        t.f = [base, gc, n0_inv](const NPoint& n) { return base(gc.multiply(n0_inv, n)); };
        // support shifts with the translate; keep a conservative bound
        if (std::isfinite(d.support_radius)) {
            double tau = gc.estimate_tau();
            t.support_radius = tau * (d.support_radius + gc.hnorm(n0_inv));
        }
        out.densities.push_back(std::move(t));
    }
    return out;
}

BoundaryMeasure add_measures(const BoundaryMeasure& a, const BoundaryMeasure& b) {
    BoundaryMeasure out = a;
    out.description = a.description + " + " + b.description;
    out.atoms.insert(out.atoms.end(), b.atoms.begin(), b.atoms.end());
    out.densities.insert(out.densities.end(), b.densities.begin(), b.densities.end());
    return out;
}

namespace {

// MC integral of the densities over B(center, r) in scaled ball coordinates
// n = center * delta_r(n'). The sample cloud depends only on (seed, count),
// so linearity and translation covariance hold to roundoff.
BallMassResult mc_ball_density(const HTypeGroup& g, const BoundaryMeasure& mu,
                               const NPoint& center, double r, const QuadratureSpec& quad) {
    const int dv = g.dim_v();
    const int k = g.k();
    // ball masses feed ratio estimates with percent-level tolerances; ~0.1%
    // Monte Carlo accuracy suffices, so cap well below the adaptive budget
    std::int64_t samples = std::clamp<std::int64_t>(quad.max_evals, 1000, 400'000);
    double box_vol = std::pow(2.0, dv) * std::pow(0.5, k);
    double rq = std::pow(r, g.Q());
    std::int64_t nchunks = (samples + 8191) / 8192;
    std::vector<cplx> partial(nchunks, cplx{0.0, 0.0});
    std::vector<double> partial_sq(nchunks, 0.0);
    std::uint64_t seed = quad.seed;
    parallel_for(nchunks, [&](std::int64_t c) {
        std::int64_t i0 = c * 8192, i1 = std::min<std::int64_t>(samples, i0 + 8192);
        NPoint np;
        np.X.resize(dv);
        np.Z.resize(k);
        cplx sum{0.0, 0.0};
        double sq = 0.0;
        for (std::int64_t i = i0; i < i1; ++i) {
            CounterRng rng(seed, 0x6d63b411u ^ static_cast<std::uint64_t>(i));
            for (int j = 0; j < dv; ++j) np.X[j] = 2.0 * rng.next_double() - 1.0;
            for (int j = 0; j < k; ++j) np.Z[j] = 0.5 * rng.next_double() - 0.25;
            if (g.hnorm(np) >= 1.0) continue;
            cplx v = density_value(mu, g.multiply(center, g.dilate(r, np)));
            sum += v;
            sq += std::norm(v);
        }
        partial[c] = sum;
        partial_sq[c] = sq;
    });
    cplx sum{0.0, 0.0};
    double sq = 0.0;
    for (std::int64_t c = 0; c < nchunks; ++c) {
        sum += partial[c];
        sq += partial_sq[c];
    }
    double n = static_cast<double>(samples);
    cplx mean = sum / n;
    double var = std::max(0.0, sq / n - std::norm(mean));
    BallMassResult out;
    out.value = box_vol * rq * mean;
    out.error = box_vol * rq * std::sqrt(var / n);
    return out;
}

}  // namespace

BallMassResult ball_mass(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& center,
                         double r, const QuadratureSpec& quad) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_mass requires r > 0");
    g.check_point(center);
    BallMassResult out;
    for (const auto& [n, w] : mu.atoms)
        if (g.quasi_dist(center, n) < r) out.value += w;
    if (mu.has_density()) {
        BallMassResult d = mc_ball_density(g, mu, center, r, quad);
        out.value += d.value;
        out.error += d.error;
    }
    return out;
}

BallMassResult ball_mass_abs(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& center,
                             double r, const QuadratureSpec& quad) {
    return ball_mass(g, abs_measure(mu), center, r, quad);
}

std::vector<BallSpec> default_ball_family(const HTypeGroup& g, std::uint64_t seed, int centers,
                                          int radii) {
    std::vector<BallSpec> out;
    CounterRng rng(seed, 0xba11u);
    for (int c = 0; c < centers; ++c) {
        NPoint center = g.identity();
        if (c > 0) {  // first ball is centered at the vertex
            for (auto& x : center.X) x = rng.next_gaussian();
            for (auto& z : center.Z) z = 0.25 * rng.next_gaussian();
        }
        for (int j = 0; j < radii; ++j) {
            double radius = 0.5 * std::pow(2.0, j - radii / 2);
            out.push_back({center, radius});
        }
    }
    return out;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (count < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("bad log grid");
    std::vector<double> g(count);
    double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) g[i] = lo * std::exp(step * i);
    return g;
}

LimitEstimate estimate_limit_from_samples(std::vector<std::pair<double, cplx>> samples,
                                          double tol) {
    LimitEstimate e;
    e.samples = std::move(samples);
    size_t n = e.samples.size();
    if (n < 3) return e;
    cplx v1 = e.samples[n - 3].second, v2 = e.samples[n - 2].second, v3 = e.samples[n - 1].second;
    double scale = std::max(1.0, std::abs(v3));
    double d12 = std::abs(v2 - v1), d23 = std::abs(v3 - v2);
    e.last_delta = std::max(d12, d23);
    e.converged = e.last_delta <= tol * scale;
    e.value = v3;
    // Aitken extrapolation when the geometric trend is clean
    cplx denom = v3 - 2.0 * v2 + v1;
    if (std::abs(denom) > 1e-14 * scale) {
        cplx extrap = v3 - (v3 - v2) * (v3 - v2) / denom;
        if (std::abs(extrap - v3) <= 4.0 * e.last_delta) e.value = extrap;
    }
    return e;
}

LimitEstimate strong_derivative(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& n0,
                                const std::vector<BallSpec>& ball_family,
                                const std::vector<double>& r_schedule, double tol,
                                const QuadratureSpec& quad) {
    if (ball_family.empty()) throw std::invalid_argument("strong_derivative: empty ball family");
    for (size_t i = 1; i < r_schedule.size(); ++i)
        if (!(r_schedule[i] < r_schedule[i - 1]))
            throw std::invalid_argument("strong_derivative: r_schedule must decrease");
    double V = g.unit_ball_volume();
    std::vector<LimitEstimate> per_ball(ball_family.size());
    parallel_for(static_cast<std::int64_t>(ball_family.size()), [&](std::int64_t b) {
        const BallSpec& ball = ball_family[b];
        std::vector<std::pair<double, cplx>> samples;
        for (double r : r_schedule) {
            NPoint center = g.multiply(n0, g.dilate(r, ball.center));
            double radius = r * ball.radius;
            cplx mass = ball_mass(g, mu, center, radius, quad).value;
            double vol = std::pow(radius, g.Q()) * V;
            samples.emplace_back(r, mass / vol);
        }
        per_ball[b] = estimate_limit_from_samples(std::move(samples), tol);
    });
    LimitEstimate out;
    cplx mean{0.0, 0.0};
    bool all_conv = true;
    for (const auto& e : per_ball) {
        all_conv = all_conv && e.converged;
        mean += e.value;
        out.last_delta = std::max(out.last_delta, e.last_delta);
    }
    mean /= static_cast<double>(per_ball.size());
    double spread = 0.0;
    for (const auto& e : per_ball) spread = std::max(spread, std::abs(e.value - mean));
    double scale = std::max(1.0, std::abs(mean));
    out.converged = all_conv && spread <= 2.0 * tol * scale;
    out.value = mean;
    out.samples = per_ball.front().samples;
    out.last_delta = std::max(out.last_delta, spread);
    return out;
}

namespace {

std::vector<double> ball_ratios(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& n0,
                                const std::vector<double>& radius_grid,
                                const QuadratureSpec& quad) {
    double V = g.unit_ball_volume();
    BoundaryMeasure abs_mu = abs_measure(mu);
    std::vector<double> ratios(radius_grid.size());
    parallel_for(static_cast<std::int64_t>(radius_grid.size()), [&](std::int64_t i) {
        double r = radius_grid[i];
        double mass = ball_mass(g, abs_mu, n0, r, quad).value.real();
        ratios[i] = mass / (std::pow(r, g.Q()) * V);
    });
    return ratios;
}

// Small-r blow-up heuristic: ratios monotonically increasing toward small r
// over the smallest decade, with at least 8x growth across it.
bool small_r_unbounded(const std::vector<double>& radii, const std::vector<double>& ratios) {
    size_t n = radii.size();
    if (n < 3) return false;
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return radii[a] < radii[b]; });
    double r_min = radii[order.front()];
    // points within one decade of the smallest radius, smallest first
    std::vector<size_t> decade;
    for (size_t i : order)
        if (radii[i] <= 10.0 * r_min) decade.push_back(i);
    if (decade.size() < 2) return false;
    bool increasing_toward_small_r = true;
    for (size_t j = 0; j + 1 < decade.size(); ++j)
        if (ratios[decade[j]] < ratios[decade[j + 1]] * 0.999) increasing_toward_small_r = false;
    return increasing_toward_small_r && ratios[decade.front()] >= 8.0 * ratios[decade.back()];
}

}  // namespace

MaximalResult maximal_function(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& n0,
                               const std::vector<double>& radius_grid,
                               const QuadratureSpec& quad) {
    if (radius_grid.empty()) throw std::invalid_argument("maximal_function: empty grid");
    double span = *std::max_element(radius_grid.begin(), radius_grid.end()) /
                  *std::min_element(radius_grid.begin(), radius_grid.end());
    if (span < 1e4)
        throw std::invalid_argument("maximal_function: radius grid must span >= 4 decades");
    auto ratios = ball_ratios(g, mu, n0, radius_grid, quad);
    MaximalResult out;
    out.value = *std::max_element(ratios.begin(), ratios.end());
    out.infinite = small_r_unbounded(radius_grid, ratios);
    return out;
}

std::pair<bool, double> check_H1(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& n0,
                                 double t0, const std::vector<double>& radius_grid,
                                 const QuadratureSpec& quad) {
    for (double r : radius_grid)
        if (!(r > 0.0 && r < t0))
            throw std::invalid_argument("check_H1: grid must lie in (0, t0)");
    auto ratios = ball_ratios(g, mu, n0, radius_grid, quad);
    double sup = *std::max_element(ratios.begin(), ratios.end());
    return {!small_r_unbounded(radius_grid, ratios), sup};
}

}  // namespace narlab
