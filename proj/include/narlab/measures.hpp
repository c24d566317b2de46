#ifndef NARLAB_MEASURES_HPP
#define NARLAB_MEASURES_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "narlab/htype.hpp"
#include "narlab/quadrature.hpp"

namespace narlab {

using cplx = std::complex<double>;

// scalar field on S = NA, the common argument of limits and operators
using SField = std::function<cplx(const SPoint&)>;

struct Density {
    std::string name;
    std::function<cplx(const NPoint&)> f;  // weight already applied
    double support_radius = 0.0;           // infinity for unbounded support
    bool smooth = true;
};

// Finite combination of atoms and densities against Haar measure on N.
struct BoundaryMeasure {
    std::vector<std::pair<NPoint, cplx>> atoms;
    std::vector<Density> densities;
    std::string description;

    bool has_density() const { return !densities.empty(); }
};

// registry names: "haar", "indicator_ball:r", "outside_ball:r",
// "heaviside_x1", "gaussian:s" (exact strings, part of the CLI contract)
Density make_density(const HTypeGroup& g, const std::string& name, cplx weight);
std::vector<std::string> registered_density_names();
BoundaryMeasure make_density_measure(const HTypeGroup& g, const std::string& name,
                                     cplx weight = {1.0, 0.0});

cplx density_value(const BoundaryMeasure& mu, const NPoint& n);
BoundaryMeasure abs_measure(const BoundaryMeasure& mu);
BoundaryMeasure translate_measure(const HTypeGroup& g, const NPoint& n0, const BoundaryMeasure& mu);
BoundaryMeasure add_measures(const BoundaryMeasure& a, const BoundaryMeasure& b);

struct BallMassResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
};

// mu(B(center, r)); atoms summed exactly, densities by seeded Monte Carlo in
// ball coordinates (relative accuracy independent of r).
BallMassResult ball_mass(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& center,
                         double r, const QuadratureSpec& quad);
BallMassResult ball_mass_abs(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& center,
                             double r, const QuadratureSpec& quad);

struct LimitEstimate {
    cplx value{0.0, 0.0};
    bool converged = false;
    double last_delta = 0.0;
    std::vector<std::pair<double, cplx>> samples;  // (parameter, value)
};

struct BallSpec {
    NPoint center;
    double radius = 1.0;
};

// Cauchy criterion on the last three samples plus Aitken extrapolation of the
// reported value; shared by every limit-style estimator.
LimitEstimate estimate_limit_from_samples(std::vector<std::pair<double, cplx>> samples,
                                          double tol);

std::vector<BallSpec> default_ball_family(const HTypeGroup& g, std::uint64_t seed = 11,
                                          int centers = 5, int radii = 3);
std::vector<double> log_grid(double lo, double hi, int count);

// D mu (n0): per-ball limits of mu(n0 delta_r(B)) / m(n0 delta_r(B)); converged
// only if every ball's limit exists and all agree within tol.
LimitEstimate strong_derivative(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& n0,
                                const std::vector<BallSpec>& ball_family,
                                const std::vector<double>& r_schedule, double tol,
                                const QuadratureSpec& quad);

struct MaximalResult {
    double value = 0.0;
    bool infinite = false;
};

MaximalResult maximal_function(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& n0,
                               const std::vector<double>& radius_grid, const QuadratureSpec& quad);

// (bounded?, sampled sup) of |mu|(B(n0,r))/m(B(n0,r)) over grid in (0, t0)
std::pair<bool, double> check_H1(const HTypeGroup& g, const BoundaryMeasure& mu, const NPoint& n0,
                                 double t0, const std::vector<double>& radius_grid,
                                 const QuadratureSpec& quad);

}  // namespace narlab

#endif
