#pragma once

#include <utility>

#include "harvest/model.hpp"
#include "harvest/operators.hpp"

namespace harvest {

/// Principal eigenpair of -Δ + V with Robin boundary. phi is normalized to
/// ‖phi‖_L2 = 1 and positive at every node; phi_sup reports the sup norm of
/// that normalization as metadata.
struct EigenPair {
    double sigma1 = 0.0;
    ScalarField phi;
    double residual = 0.0;  // ‖A·phi - sigma1·phi‖_L2
    int iterations = 0;
    double phi_sup = 0.0;
};

struct EigenOptions {
    double tol = 1e-11;      // successive Rayleigh-quotient difference
    int max_iters = 100000;
};

/// Inverse power iteration on A + s·I with shift s = max(0, -min V) + 1.
/// Throws MaxIterations when the eigenvalue gap is too small to converge;
/// never returns a sign-changing eigenfunction.
EigenPair principal_eigenvalue(const GridSpec& grid, double q, const ScalarField& V,
                               const EigenOptions& opts = {});

/// Discrete Rayleigh quotient (x^T M x)/(x^T W x) of the assembled operator.
double rayleigh_quotient(const DiscreteOperator& op, const ScalarField& x);

/// Potential that vanishes on a state solution:
///   V₁ = λ(-1 + h + u/K + c·u/(1+u²));  (-Δ + V₁) u = 0 when u solves the
/// state equation for h, so σ₁(V₁) = 0 there.
ScalarField state_potential(const ScalarField& u, const ScalarField& h,
                            const ModelParams& params);

/// Two-solution comparison potential
///   V₂ = λ(-1 + h + (u_h+u_g)/K + c(u_h+u_g)/((1+u_h²)(1+u_g²))).
/// Its principal eigenvalue is positive in the wellposed regime, which is
/// what certifies solvability of the adjoint and sensitivity equations.
/// With u_g = u_h it collapses to the adjoint potential.
ScalarField pair_potential(const ScalarField& u_h, const ScalarField& u_g,
                           const ScalarField& h, const ModelParams& params);

/// Both comparison potentials at once: (V₁, V₂).
std::pair<ScalarField, ScalarField> comparison_potentials(const ScalarField& u_h,
                                                          const ScalarField& u_g,
                                                          const ScalarField& h,
                                                          const ModelParams& params);

/// Linearization potential -λ f_h'(u) = λ(-1 + 2u/K + 2c·u/(1+u²)² + h);
/// the adjoint and sensitivity equations share it.
ScalarField adjoint_potential(const ScalarField& u, const ScalarField& h,
                              const ModelParams& params);

}  // namespace harvest
