#pragma once

#include "harvest/eigenpair.hpp"
#include "harvest/state.hpp"

namespace harvest {

struct AdjointSolution {
    ScalarField p;
    ScalarField potential;      // λ(-1 + 2u/K + 2c·u/(1+u²)² + h)
    double sigma1_check = 0.0;  // σ₁(potential), recorded before solving
    double residual = 0.0;      // relative L2 residual of the linear solve
};

/// Solves the adjoint equation (-Δ + V_adj) p = h for a state u belonging to
/// the control h. σ₁(V_adj) is computed first as the solvability guard;
/// σ₁ ≤ 0 throws NotCoercive (inputs outside the theory's regime).
AdjointSolution solve_adjoint(const ScalarField& u, const ControlField& h,
                              const ModelParams& params);

/// Sensitivity of the state in direction gamma: solves
/// (-Δ + V_adj) ψ = -λ γ u. Same potential and guard as the adjoint, so the
/// two solves share one matrix and the discrete duality identity
/// ∫ψh = -λ∫γup holds to solver tolerance.
ScalarField solve_sensitivity(const ScalarField& u, const ControlField& h,
                              const ScalarField& gamma, const ModelParams& params);

}  // namespace harvest
