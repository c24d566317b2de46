#ifndef NARLAB_DIFFOPS_HPP
#define NARLAB_DIFFOPS_HPP

#include <functional>

#include "narlab/htype.hpp"
#include "narlab/measures.hpp"

namespace narlab {

// Finite-difference configuration. Steps are anisotropic and follow the
// dilation weights: h_a = step * a, h_X = step * sqrt(a) (step * a on the
// abelian boundary), h_Z = step * a, so accuracy is uniform in a.
struct FdScheme {
    int order = 4;          // 2 or 4
    double step = 1e-3;     // relative step
    bool richardson = true; // one extrapolation level on the full operator
};

// Laplace-Beltrami operator of S = NA:
//   L = a^2 d_a^2 + (1 - Q) a d_a + L_a,
//   L_a = a (a + ||X||^2/4) sum_r d_{Z_r}^2 + a sum_i d_{X_i}^2
//         + a^2 sum_{r,i} <J_r X, e_i> d_{X_i} d_{Z_r}
// (abelian boundary: L_a = a^2 Delta_X).
cplx apply_L(const HTypeGroup& g, const SField& u, const SPoint& x, const FdScheme& scheme);

// L^beta = L + (1 - 2 beta) a d_a
cplx apply_L_beta(const HTypeGroup& g, double beta, const SField& u, const SPoint& x,
                  const FdScheme& scheme);

// max over points of |L u - (beta^2 - rho^2) u| / (|u| + eps)
double eigen_residual(const HTypeGroup& g, double beta, const SField& u,
                      const std::vector<SPoint>& points, const FdScheme& scheme);

// companion residual: |L^beta (a^{beta-rho} u)| / (|a^{beta-rho} u| + eps)
double harmonic_residual(const HTypeGroup& g, double beta, const SField& u,
                         const std::vector<SPoint>& points, const FdScheme& scheme);

}  // namespace narlab

#endif
