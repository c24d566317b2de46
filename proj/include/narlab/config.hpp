#ifndef NARLAB_CONFIG_HPP
#define NARLAB_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "narlab/geometry.hpp"

namespace narlab {

// One experiment description, deserialized from JSON. Exactly the fields the
// runner needs; unknown keys are rejected, invalid values are reported all at
// once with their JSON paths.
struct ExperimentConfig {
    std::string kind;   // kernel-check | limit | hl-check | fatou | two-ray | diffop-residual
    std::string space;  // "heisenberg:p" | "quaternionic:p" | "abelian:d" | "hyperbolic:l"
    double beta = 1.0;

    // measure: atoms plus named densities from the registry
    struct AtomSpec {
        std::vector<double> X, Z;
        cplx weight{1.0, 0.0};
    };
    struct DensitySpec {
        std::string name;
        cplx weight{1.0, 0.0};
    };
    std::vector<AtomSpec> atoms;
    std::vector<DensitySpec> densities;

    std::vector<double> n0_X, n0_Z;  // base point, defaults to the identity

    QuadratureSpec quadrature;
    Schedule schedule;
    Sector sector;          // fatou; caps default to seeded centers
    bool sector_given = false;
    std::vector<double> apertures{0.5, 1.0, 2.0};
    std::uint64_t seed = 1;

    // kind-specific knobs
    std::vector<double> a_grid{0.25, 1.0, 4.0};   // kernel-check
    double kernel_tol = 1e-4;                     // kernel-check
    Ray ray;                                      // limit
    bool ray_given = false;
    int sample_count = 100;                       // hl-check
    int ray_sample_count = 8;                     // fatou
    int sequence_count = 4;                       // fatou
    double consistency_tol = 0.02;                // fatou
    double x0 = 0.0;                              // two-ray
    double alpha1 = -1.0, alpha2 = 1.0;           // two-ray
    std::vector<double> alpha_grid{-2.0, -1.0, 0.0, 1.0, 2.0};  // two-ray
    int point_count = 10;                         // diffop-residual
    double residual_tol_analytic = 1e-6;          // diffop-residual
    double residual_tol_kernel = 1e-3;            // diffop-residual
};

struct ConfigError {
    std::string path;
    std::string message;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;  // set iff errors is empty
    std::vector<ConfigError> errors;
};

ParseResult parse_config(const std::string& json_text);

}  // namespace narlab

#endif
