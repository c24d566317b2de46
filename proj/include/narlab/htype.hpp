#ifndef NARLAB_HTYPE_HPP
#define NARLAB_HTYPE_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "narlab/quadrature.hpp"

namespace narlab {

// Boundary point (X, Z) of N in exponential coordinates.
struct NPoint {
    std::vector<double> X;
    std::vector<double> Z;
};

// Interior point (n, a) of S = NA, a > 0.
struct SPoint {
    NPoint n;
    double a = 1.0;
};

// H-type group N = exp(v + z) with dim v = dim_v, dim z = k, bracket encoded
// by k skew-symmetric J-maps on v. k = 0 is the degenerate abelian boundary
// of real hyperbolic space, with isotropic dilation and Euclidean norm.
class HTypeGroup {
public:
    static HTypeGroup heisenberg(int p);
    static HTypeGroup quaternionic(int p);  // requires 2p divisible by 4
    static HTypeGroup abelian(int dim);
    // "heisenberg:p", "quaternionic:p", "abelian:d"
    static HTypeGroup from_preset(const std::string& preset);

    int dim_v() const { return dim_v_; }
    int k() const { return k_; }
    int dim() const { return dim_v_ + k_; }
    int Q() const { return Q_; }
    double rho() const { return 0.5 * Q_; }
    bool abelian_boundary() const { return k_ == 0; }
    const std::string& preset_name() const { return preset_; }

    // J_r as row-major dim_v x dim_v matrices
    const std::vector<std::vector<double>>& jmaps() const { return jmaps_; }
    std::vector<double> jmap_apply(int r, const std::vector<double>& X) const;
    // <J_r X, e_i>, the bracket coefficient <[X, e_i], e_r>
    double bracket_coeff(const std::vector<double>& X, int i, int r) const;

    NPoint identity() const;
    NPoint multiply(const NPoint& n1, const NPoint& n2) const;
    NPoint inverse(const NPoint& n) const;
    NPoint dilate(double a, const NPoint& n) const;
    double hnorm(const NPoint& n) const;
    double quasi_dist(const NPoint& n1, const NPoint& n2) const;

    // max over sampled pairs of d(n n1) / (d(n) + d(n1)), clamped to >= 1;
    // deterministic given seed, cached after first call.
    double estimate_tau(int sample_count = 20000, std::uint64_t seed = 7) const;

    // m(B(0,1)); seeded Monte Carlo over the bounding box, cached.
    double unit_ball_volume(const QuadratureSpec& spec) const;
    double unit_ball_volume() const;  // default spec

    void check_point(const NPoint& n) const;  // throws on dimension mismatch

private:
    HTypeGroup(int dim_v, int k, std::vector<std::vector<double>> jmaps, std::string preset);

    int dim_v_;
    int k_;
    int Q_;
    std::vector<std::vector<double>> jmaps_;
    std::string preset_;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

}  // namespace narlab

#endif
