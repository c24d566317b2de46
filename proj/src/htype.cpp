#include "narlab/htype.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>

#include "narlab/parallel.hpp"
#include "narlab/rng.hpp"

namespace narlab {

struct HTypeGroup::Cache {
    std::mutex mu;
    std::optional<double> tau;
    std::optional<double> ball_volume;
};

HTypeGroup::HTypeGroup(int dim_v, int k, std::vector<std::vector<double>> jmaps, std::string preset)
    : dim_v_(dim_v), k_(k), jmaps_(std::move(jmaps)), preset_(std::move(preset)),
      cache_(std::make_shared<Cache>()) {
    Q_ = (k_ == 0) ? dim_v_ : dim_v_ / 2 + k_;
}

HTypeGroup HTypeGroup::heisenberg(int p) {
    if (p < 1) throw std::invalid_argument("heisenberg preset requires p >= 1");
    int d = 2 * p;
    std::vector<double> J(static_cast<size_t>(d) * d, 0.0);
    // block-diagonal rotation: J e_{2m} = e_{2m+1}, J e_{2m+1} = -e_{2m}
    for (int m = 0; m < p; ++m) {
        J[static_cast<size_t>(2 * m) * d + (2 * m + 1)] = -1.0;
        J[static_cast<size_t>(2 * m + 1) * d + (2 * m)] = 1.0;
    }
    return HTypeGroup(d, 1, {std::move(J)}, "heisenberg:" + std::to_string(p));
}

HTypeGroup HTypeGroup::quaternionic(int p) {
    if (p < 2 || (2 * p) % 4 != 0)
        throw std::invalid_argument("quaternionic preset requires 2p divisible by 4");
    int d = 2 * p;
    int blocks = d / 4;
    // left multiplication by i, j, k on H^m
    const double qi[16] = {0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0};
    const double qj[16] = {0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0};
    const double qk[16] = {0, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0};
    std::vector<std::vector<double>> jmaps(3, std::vector<double>(static_cast<size_t>(d) * d, 0.0));
    const double* q[3] = {qi, qj, qk};
    for (int r = 0; r < 3; ++r)
        for (int b = 0; b < blocks; ++b)
            for (int row = 0; row < 4; ++row)
                for (int col = 0; col < 4; ++col)
                    jmaps[r][static_cast<size_t>(4 * b + row) * d + (4 * b + col)] = q[r][4 * row + col];
    return HTypeGroup(d, 3, std::move(jmaps), "quaternionic:" + std::to_string(p));
}

HTypeGroup HTypeGroup::abelian(int dim) {
    if (dim < 1) throw std::invalid_argument("abelian preset requires dim >= 1");
    return HTypeGroup(dim, 0, {}, "abelian:" + std::to_string(dim));
}

HTypeGroup HTypeGroup::from_preset(const std::string& preset) {
    auto colon = preset.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("group preset must be name:param, got '" + preset + "'");
    std::string name = preset.substr(0, colon);
    int param = 0;
    try {
        param = std::stoi(preset.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("bad group preset parameter in '" + preset + "'");
    }
    if (name == "heisenberg") return heisenberg(param);
    if (name == "quaternionic") return quaternionic(param);
    if (name == "abelian") return abelian(param);
    throw std::invalid_argument("unknown group preset '" + name +
                                "' (known: heisenberg, quaternionic, abelian)");
}

void HTypeGroup::check_point(const NPoint& n) const {
    if (static_cast<int>(n.X.size()) != dim_v_ || static_cast<int>(n.Z.size()) != k_)
        throw std::invalid_argument("point dimensions do not match group " + preset_);
}

std::vector<double> HTypeGroup::jmap_apply(int r, const std::vector<double>& X) const {
    const auto& J = jmaps_.at(r);
    std::vector<double> out(dim_v_, 0.0);
    for (int i = 0; i < dim_v_; ++i) {
        double s = 0.0;
        for (int j = 0; j < dim_v_; ++j) s += J[static_cast<size_t>(i) * dim_v_ + j] * X[j];
        out[i] = s;
    }
    return out;
}

double HTypeGroup::bracket_coeff(const std::vector<double>& X, int i, int r) const {
    const auto& J = jmaps_.at(r);
    double s = 0.0;
    for (int j = 0; j < dim_v_; ++j) s += J[static_cast<size_t>(i) * dim_v_ + j] * X[j];
    return s;  // (J_r X)_i = <J_r X, e_i>
}

NPoint HTypeGroup::identity() const {
    return NPoint{std::vector<double>(dim_v_, 0.0), std::vector<double>(k_, 0.0)};
}

NPoint HTypeGroup::multiply(const NPoint& n1, const NPoint& n2) const {
    check_point(n1);
    check_point(n2);
    NPoint out;
    out.X.resize(dim_v_);
    for (int i = 0; i < dim_v_; ++i) out.X[i] = n1.X[i] + n2.X[i];
    out.Z.resize(k_);
    for (int r = 0; r < k_; ++r) {
        // Z''_r = Z_r + Z'_r + (1/2) <J_r X, X'>
        double br = 0.0;
        const auto& J = jmaps_[r];
        for (int i = 0; i < dim_v_; ++i) {
            double ji = 0.0;
            for (int j = 0; j < dim_v_; ++j) ji += J[static_cast<size_t>(i) * dim_v_ + j] * n1.X[j];
            br += ji * n2.X[i];
        }
        out.Z[r] = n1.Z[r] + n2.Z[r] + 0.5 * br;
    }
    return out;
}

NPoint HTypeGroup::inverse(const NPoint& n) const {
    check_point(n);
    NPoint out = n;
    for (auto& x : out.X) x = -x;
    for (auto& z : out.Z) z = -z;
    return out;
}

NPoint HTypeGroup::dilate(double a, const NPoint& n) const {
    if (!(a > 0.0)) throw std::invalid_argument("dilation requires a > 0");
    check_point(n);
    NPoint out = n;
    double sx = (k_ == 0) ? a : std::sqrt(a);
    for (auto& x : out.X) x *= sx;
    for (auto& z : out.Z) z *= a;
    return out;
}

double HTypeGroup::hnorm(const NPoint& n) const {
    check_point(n);
    double x2 = 0.0;
    for (double x : n.X) x2 += x * x;
    if (k_ == 0) return std::sqrt(x2);
    double z2 = 0.0;
    for (double z : n.Z) z2 += z * z;
    return std::sqrt(x2 * x2 + 16.0 * z2);
}

double HTypeGroup::quasi_dist(const NPoint& n1, const NPoint& n2) const {
    return hnorm(multiply(inverse(n1), n2));
}

double HTypeGroup::estimate_tau(int sample_count, std::uint64_t seed) const {
    if (sample_count < 1) throw std::invalid_argument("estimate_tau requires sample_count >= 1");
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        if (cache_->tau) return *cache_->tau;
    }
    CounterRng rng(seed, 0x7a75u);
    double best = 1.0;
    for (int s = 0; s < sample_count; ++s) {
        NPoint a, b;
        a.X.resize(dim_v_);
        b.X.resize(dim_v_);
        a.Z.resize(k_);
        b.Z.resize(k_);
        double scale_a = std::exp(3.0 * (rng.next_double() - 0.5));
        double scale_b = std::exp(3.0 * (rng.next_double() - 0.5));
        for (int i = 0; i < dim_v_; ++i) {
            a.X[i] = scale_a * rng.next_gaussian();
            b.X[i] = scale_b * rng.next_gaussian();
        }
        for (int r = 0; r < k_; ++r) {
            a.Z[r] = scale_a * scale_a * rng.next_gaussian();
            b.Z[r] = scale_b * scale_b * rng.next_gaussian();
        }
        double da = hnorm(a), db = hnorm(b);
        if (da + db == 0.0) continue;
        double ratio = hnorm(multiply(a, b)) / (da + db);
        best = std::max(best, ratio);
    }
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (!cache_->tau) cache_->tau = best;
    return *cache_->tau;
}

double HTypeGroup::unit_ball_volume(const QuadratureSpec& spec) const {
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        if (cache_->ball_volume) return *cache_->ball_volume;
    }
    std::int64_t samples = std::clamp<std::int64_t>(spec.max_evals, 10000, 20'000'000);
    double box_vol = std::pow(2.0, dim_v_) * std::pow(0.5, k_);  // |z_r| <= 1/4
    std::uint64_t seed = spec.seed;
    auto eval = [&](std::int64_t i0, std::int64_t i1, double& sum, double& sumsq) {
        NPoint n;
        n.X.resize(dim_v_);
        n.Z.resize(k_);
        for (std::int64_t i = i0; i < i1; ++i) {
            CounterRng rng(seed, 0xba110000u + static_cast<std::uint64_t>(i));
            for (int j = 0; j < dim_v_; ++j) n.X[j] = 2.0 * rng.next_double() - 1.0;
            for (int r = 0; r < k_; ++r) n.Z[r] = 0.5 * rng.next_double() - 0.25;
            double v = (hnorm(n) < 1.0) ? 1.0 : 0.0;
            sum += v;
            sumsq += v;
        }
    };
    MeanVar mv = chunked_mean(samples, 8192, eval, true);
    double vol = box_vol * mv.mean;
    if (!(vol > 0.0)) throw QuadratureError("unit ball volume estimate failed");
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (!cache_->ball_volume) cache_->ball_volume = vol;
    return *cache_->ball_volume;
}

double HTypeGroup::unit_ball_volume() const {
    QuadratureSpec spec;
    spec.engine = QuadratureSpec::Engine::monte_carlo;
    spec.max_evals = 4'000'000;
    spec.seed = 20240901;
    return unit_ball_volume(spec);
}

}  // namespace narlab
