#include "narlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "narlab/parallel.hpp"

namespace narlab {

QuadratureSpec::Engine QuadratureSpec::engine_from_string(const std::string& s) {
    if (s == "adaptive_tensor") return Engine::adaptive_tensor;
    if (s == "monte_carlo") return Engine::monte_carlo;
    throw std::invalid_argument("unknown quadrature engine '" + s +
                                "' (known: adaptive_tensor, monte_carlo)");
}

std::string QuadratureSpec::engine_to_string(Engine e) {
    return e == Engine::adaptive_tensor ? "adaptive_tensor" : "monte_carlo";
}

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("quadrature rel_tol must be positive");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature abs_tol must be positive");
    if (max_evals < 100) throw std::invalid_argument("quadrature max_evals must be >= 100");
    if (!(truncation_radius > 0.0))
        throw std::invalid_argument("quadrature truncation_radius must be positive");
}

namespace {

using cplx = std::complex<double>;

struct Region {
    std::vector<double> center;
    std::vector<double> halfw;
    cplx value{0.0, 0.0};
    double err = 0.0;
    int split_dim = 0;
};

// 15-point Gauss-Kronrod pair on [c-h, c+h].
void eval_gk15(const BoxIntegrand& f, Region& reg) {
    static const double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static const double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static const double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    double c = reg.center[0], h = reg.halfw[0];
    cplx vals[15];
    vals[14] = f(&c, 1);
    for (int j = 0; j < 7; ++j) {
        double xm = c - h * xgk[j];
        double xp = c + h * xgk[j];
        vals[2 * j] = f(&xm, 1);
        vals[2 * j + 1] = f(&xp, 1);
    }
    cplx kron = wgk[7] * vals[14];
    for (int j = 0; j < 7; ++j) kron += wgk[j] * (vals[2 * j] + vals[2 * j + 1]);
    cplx gauss = wg[3] * vals[14];
    for (int j = 0; j < 3; ++j) gauss += wg[j] * (vals[4 * j + 2] + vals[4 * j + 3]);
    reg.value = h * kron;
    reg.err = std::abs(h * (kron - gauss));
    reg.split_dim = 0;
}

// Genz-Malik embedded degree 7/5 rule for dim >= 2.
void eval_genz_malik(const BoxIntegrand& f, Region& reg) {
    const int d = static_cast<int>(reg.center.size());
    const double lambda2 = std::sqrt(9.0 / 70.0);
    const double lambda4 = std::sqrt(9.0 / 10.0);
    const double lambda5 = std::sqrt(9.0 / 19.0);
    const double w1 = (12824.0 - 9120.0 * d + 400.0 * d * d) / 19683.0;
    const double w2 = 980.0 / 6561.0;
    const double w3 = (1820.0 - 400.0 * d) / 19683.0;
    const double w4 = 200.0 / 19683.0;
    const double w5 = (6859.0 / 19683.0) / static_cast<double>(1u << d);
    const double e1 = (729.0 - 950.0 * d + 50.0 * d * d) / 729.0;
    const double e2 = 245.0 / 486.0;
    const double e3 = (265.0 - 100.0 * d) / 1458.0;
    const double e4 = 25.0 / 729.0;
    const double ratio = (lambda2 * lambda2) / (lambda4 * lambda4);

    std::vector<double> p(reg.center);
    cplx val0 = f(p.data(), d);
    cplx sum2{0, 0}, sum3{0, 0}, sum4{0, 0}, sum5{0, 0};
    double max_diff = -1.0;
    int split = 0;
    for (int i = 0; i < d; ++i) {
        double h = reg.halfw[i];
        double c = reg.center[i];
        p[i] = c - lambda2 * h;
        cplx v0 = f(p.data(), d);
        p[i] = c + lambda2 * h;
        cplx v1 = f(p.data(), d);
        p[i] = c - lambda4 * h;
        cplx v2 = f(p.data(), d);
        p[i] = c + lambda4 * h;
        cplx v3 = f(p.data(), d);
        p[i] = c;
        sum2 += v0 + v1;
        sum3 += v2 + v3;
        cplx diff = v0 + v1 - 2.0 * val0 - ratio * (v2 + v3 - 2.0 * val0);
        double dmag = std::abs(diff.real()) + std::abs(diff.imag());
        if (dmag > max_diff) {
            max_diff = dmag;
            split = i;
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            double ci = reg.center[i], cj = reg.center[j];
            double hi = lambda4 * reg.halfw[i], hj = lambda4 * reg.halfw[j];
            for (int si = -1; si <= 1; si += 2)
                for (int sj = -1; sj <= 1; sj += 2) {
                    p[i] = ci + si * hi;
                    p[j] = cj + sj * hj;
                    sum4 += f(p.data(), d);
                }
            p[i] = ci;
            p[j] = cj;
        }
    for (unsigned corner = 0; corner < (1u << d); ++corner) {
        for (int i = 0; i < d; ++i)
            p[i] = reg.center[i] + ((corner >> i) & 1u ? 1.0 : -1.0) * lambda5 * reg.halfw[i];
        sum5 += f(p.data(), d);
    }

    double vol = 1.0;
    for (int i = 0; i < d; ++i) vol *= 2.0 * reg.halfw[i];
    cplx res7 = vol * (w1 * val0 + w2 * sum2 + w3 * sum3 + w4 * sum4 + w5 * sum5);
    cplx res5 = vol * (e1 * val0 + e2 * sum2 + e3 * sum3 + e4 * sum4);
    reg.value = res7;
    reg.err = std::abs(res7 - res5);
    reg.split_dim = split;
}

std::int64_t rule_evals(int d) {
    if (d == 1) return 15;
    return 1 + 4 * static_cast<std::int64_t>(d) + 2 * static_cast<std::int64_t>(d) * (d - 1) +
           (std::int64_t{1} << d);
}

void eval_rule(const BoxIntegrand& f, Region& reg) {
    if (reg.center.size() == 1)
        eval_gk15(f, reg);
    else
        eval_genz_malik(f, reg);
}

}  // namespace

IntegralResult integrate_box(const BoxIntegrand& f, const std::vector<double>& lo,
                             const std::vector<double>& hi, const QuadratureSpec& spec) {
    const int d = static_cast<int>(lo.size());
    if (d < 1 || d > 10 || hi.size() != lo.size())
        throw std::invalid_argument("integrate_box: bad dimension");

    std::vector<Region> regions;
    Region first;
    first.center.resize(d);
    first.halfw.resize(d);
    for (int i = 0; i < d; ++i) {
        first.center[i] = 0.5 * (lo[i] + hi[i]);
        first.halfw[i] = 0.5 * (hi[i] - lo[i]);
        if (!(first.halfw[i] > 0.0)) throw std::invalid_argument("integrate_box: empty box");
    }
    eval_rule(f, first);
    std::int64_t evals = rule_evals(d);
    regions.push_back(std::move(first));

    // max-heap on region error
    using Entry = std::pair<double, size_t>;
    std::priority_queue<Entry> heap;
    heap.emplace(regions[0].err, 0);
    cplx total = regions[0].value;
    double total_err = regions[0].err;

    const int batch = 16;  // fixed so results do not depend on worker count
    std::vector<size_t> popped;
    std::vector<Region> children;
    while (true) {
        double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (total_err <= tol) break;
        if (evals + 2 * batch * rule_evals(d) > spec.max_evals) break;
        popped.clear();
        children.clear();
        while (!heap.empty() && static_cast<int>(popped.size()) < batch) {
            auto [err, idx] = heap.top();
            heap.pop();
            popped.push_back(idx);
        }
        if (popped.empty()) break;
        for (size_t idx : popped) {
            const Region& parent = regions[idx];
            total -= parent.value;
            total_err -= parent.err;
            Region left, right;
            left.center = parent.center;
            left.halfw = parent.halfw;
            int sd = parent.split_dim;
            left.halfw[sd] *= 0.5;
            right = left;
            left.center[sd] -= left.halfw[sd];
            right.center[sd] += right.halfw[sd];
            children.push_back(std::move(left));
            children.push_back(std::move(right));
        }
        parallel_for(static_cast<std::int64_t>(children.size()),
                     [&](std::int64_t i) { eval_rule(f, children[i]); });
        evals += static_cast<std::int64_t>(children.size()) * rule_evals(d);
        for (size_t c = 0; c < children.size(); ++c) {
            size_t slot;
            if (c < popped.size()) {
                slot = popped[c];
                regions[slot] = std::move(children[c]);
            } else {
                slot = regions.size();
                regions.push_back(std::move(children[c]));
            }
            total += regions[slot].value;
            total_err += regions[slot].err;
            heap.emplace(regions[slot].err, slot);
        }
    }

    // full resum over the live heap for accuracy and reproducibility
    std::vector<size_t> live;
    while (!heap.empty()) {
        live.push_back(heap.top().second);
        heap.pop();
    }
    std::sort(live.begin(), live.end());
    cplx sum{0, 0};
    double err_sum = 0.0;
    for (size_t idx : live) {
        sum += regions[idx].value;
        err_sum += regions[idx].err;
    }
    IntegralResult out;
    out.value = sum;
    out.error = err_sum;
    out.evals = evals;
    out.converged = err_sum <= std::max(spec.abs_tol, spec.rel_tol * std::abs(sum));
    return out;
}

IntegralResult integrate_rd(const BoxIntegrand& f, int dim, const QuadratureSpec& spec,
                            double scale) {
    BoxIntegrand g = [&f, dim, scale](const double* t, int) -> cplx {
        double x[10];
        double logjac = 0.0;
        for (int i = 0; i < dim; ++i) {
            double ti = t[i];
            double om = 1.0 - ti * ti;
            if (om <= 0.0) return {0.0, 0.0};
            x[i] = scale * ti / om;
            logjac += std::log(scale * (1.0 + ti * ti)) - 2.0 * std::log(om);
            if (!std::isfinite(x[i])) return {0.0, 0.0};
        }
        cplx v = f(x, dim);
        if (v == cplx{0.0, 0.0}) return v;
        double jac = std::exp(logjac);
        if (!std::isfinite(jac)) return {0.0, 0.0};
        return v * jac;
    };
    std::vector<double> lo(dim, -1.0), hi(dim, 1.0);
    return integrate_box(g, lo, hi, spec);
}

IntegralResult integrate_interval(const std::function<std::complex<double>(double)>& f, double lo,
                                  double hi, const QuadratureSpec& spec) {
    const double inf = std::numeric_limits<double>::infinity();
    BoxIntegrand g;
    std::vector<double> blo(1), bhi(1);
    if (lo == -inf && hi == inf) {
        g = [&f](const double* t, int) -> cplx {
            double om = 1.0 - t[0] * t[0];
            if (om <= 0.0) return {0.0, 0.0};
            double x = t[0] / om;
            if (!std::isfinite(x)) return {0.0, 0.0};
            cplx v = f(x);
            if (v == cplx{0.0, 0.0}) return v;
            double jac = (1.0 + t[0] * t[0]) / (om * om);
            if (!std::isfinite(jac)) return {0.0, 0.0};
            return v * jac;
        };
        blo[0] = -1.0;
        bhi[0] = 1.0;
    } else if (hi == inf) {
        g = [&f, lo](const double* t, int) -> cplx {
            double om = 1.0 - t[0];
            if (om <= 0.0) return {0.0, 0.0};
            double x = lo + t[0] / om;
            if (!std::isfinite(x)) return {0.0, 0.0};
            cplx v = f(x);
            if (v == cplx{0.0, 0.0}) return v;
            double jac = 1.0 / (om * om);
            if (!std::isfinite(jac)) return {0.0, 0.0};
            return v * jac;
        };
        blo[0] = 0.0;
        bhi[0] = 1.0;
    } else if (lo == -inf) {
        return integrate_interval([&f](double x) { return f(-x); }, -hi, inf, spec);
    } else {
        g = [&f](const double* x, int) { return f(x[0]); };
        blo[0] = lo;
        bhi[0] = hi;
    }
    return integrate_box(g, blo, bhi, spec);
}

}  // namespace narlab
