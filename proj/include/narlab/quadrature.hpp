#ifndef NARLAB_QUADRATURE_HPP
#define NARLAB_QUADRATURE_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace narlab {

struct QuadratureSpec {
    enum class Engine { adaptive_tensor, monte_carlo };
    Engine engine = Engine::adaptive_tensor;
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
    std::int64_t max_evals = 4'000'000;
    double truncation_radius = 32.0;
    std::uint64_t seed = 1;

    static Engine engine_from_string(const std::string& s);
    static std::string engine_to_string(Engine e);
    void validate() const;  // throws std::invalid_argument
};

struct IntegralResult {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;  // absolute error estimate (max over re/im)
    std::int64_t evals = 0;
    bool converged = false;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using BoxIntegrand = std::function<std::complex<double>(const double* x, int dim)>;

// Adaptive cubature over a finite box: Gauss-Kronrod 7/15 for dim 1,
// Genz-Malik 7/5 for dim >= 2. Deterministic; region batches are evaluated
// in parallel with results independent of worker count.
IntegralResult integrate_box(const BoxIntegrand& f, const std::vector<double>& lo,
                             const std::vector<double>& hi, const QuadratureSpec& spec);

// Integral over all of R^dim via the rational map x = scale * t / (1 - t^2)
// applied per axis, then adaptive cubature on (-1,1)^dim.
IntegralResult integrate_rd(const BoxIntegrand& f, int dim, const QuadratureSpec& spec,
                            double scale = 1.0);

// 1-D integral over (lo, hi) where either end may be infinite.
IntegralResult integrate_interval(const std::function<std::complex<double>(double)>& f,
                                  double lo, double hi, const QuadratureSpec& spec);

}  // namespace narlab

#endif
