#ifndef NARLAB_GEOMETRY_HPP
#define NARLAB_GEOMETRY_HPP

#include <optional>
#include <string>

#include "narlab/measures.hpp"
#include "narlab/transform.hpp"

namespace narlab {

// gamma(a) = (n0 . (sqrt(alpha a |cos theta|) omega, (1/4) alpha a |sin theta| zeta), a),
// a curve on the boundary of the aperture-alpha admissible cone at n0.
// Abelian boundary: the offset is alpha a sign(cos theta) omega (zeta absent).
struct Ray {
    NPoint n0;
    double alpha = 1.0;
    std::vector<double> omega;  // unit vector in R^{dim_v}
    std::vector<double> zeta;   // unit vector in R^k, empty when k = 0
    double theta = 0.0;         // in [0, 2 pi)
};

// spherical cap {u : <u, center> > cos(angular_radius)}
struct Cap {
    std::vector<double> center;
    double angular_radius = 0.39269908169872414;  // pi/8
};

// open bundle of rays: aperture alpha, caps for omega and zeta, theta interval
struct Sector {
    NPoint n0;
    double alpha = 1.0;
    Cap cap1;
    Cap cap2;  // ignored when k = 0
    double theta_lo = 0.0;
    double theta_hi = 6.283185307179586;
};

// Gamma_alpha(n0) = {(n, a) : d(n0^{-1} n) < alpha a}
struct AdmissibleDomain {
    NPoint n0;
    double alpha = 1.0;
};

// geometric approach schedule a_j = a0 * ratio^j
struct Schedule {
    double a0 = 1.0;
    double ratio = 0.5;
    int steps = 24;
    double tol = 1e-3;

    void validate() const;
};

SPoint ray_point(const HTypeGroup& g, const Ray& ray, double a);
bool in_admissible(const HTypeGroup& g, const AdmissibleDomain& dom, const SPoint& x);

LimitEstimate limit_along_ray(const HTypeGroup& g, const SField& F, const Ray& ray,
                              const Schedule& schedule);

// Rays drawn uniformly (seeded) from cap1 x cap2 x theta interval; converged
// iff every ray converges and all ray limits agree within tol.
LimitEstimate sectorial_limit(const HTypeGroup& g, const SField& F, const Sector& sector,
                              int ray_sample_count, std::uint64_t seed,
                              const Schedule& schedule);

// Several apertures, several randomized in-cone sequences per aperture
// (boundary-hugging d = 0.99 alpha a and axial n = n0 mixed in).
LimitEstimate admissible_scan(const HTypeGroup& g, const SField& F, const NPoint& n0,
                              const std::vector<double>& apertures, int sequence_count,
                              std::uint64_t seed, const Schedule& schedule);

struct FatouConfig {
    Sector sector;
    std::vector<double> apertures{0.5, 1.0, 2.0};
    Schedule schedule;
    int ray_sample_count = 8;
    int sequence_count = 4;
    std::uint64_t seed = 1;
    double h1_t0 = 1.0;
    double consistency_tol = 0.02;
};

struct FatouReport {
    bool h1 = false;
    double h1_sup = 0.0;
    LimitEstimate sectorial;
    LimitEstimate admissible;
    LimitEstimate strong_deriv;
    std::string verdict;  // "consistent", "inconsistent", or "inconclusive"
    std::vector<std::string> failures;
};

// check_H1 -> sectorial_limit -> admissible_scan -> strong_derivative, with a
// consistency verdict; sub-step failures are recorded, never dropped.
FatouReport fatou_experiment(const HTypeGroup& g, const SpectralParam& param,
                             const BoundaryMeasure& mu, const NPoint& n0,
                             const FatouConfig& config, const QuadratureSpec& quad);

// trace row for the CSV output
struct TraceRow {
    int ray_id = 0;
    double theta = 0.0;
    double a = 0.0;
    cplx value{0.0, 0.0};
};

std::vector<TraceRow> trace_rays(const HTypeGroup& g, const SField& F, const Sector& sector,
                                 int ray_sample_count, std::uint64_t seed,
                                 const Schedule& schedule);

// seeded ray drawn from the sector, used by both sectorial_limit and the trace
Ray sample_sector_ray(const HTypeGroup& g, const Sector& sector, std::uint64_t seed, int index);

}  // namespace narlab

#endif
