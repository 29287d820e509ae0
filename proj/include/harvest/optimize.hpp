#pragma once

#include <vector>

#include "harvest/adjoint.hpp"

namespace harvest {

/// Harvested revenue minus effort cost: J(h) = ∫ h u - ∫ (B₁ + B₂ h) h,
/// trapezoid quadrature.
double payoff(const ControlField& h, const ScalarField& u, const ModelParams& params);

/// Pointwise projection characterization of the optimal control:
///   h = clamp((u - λ p u - B₁) / (2 B₂), [0, H]).
/// Throws DivisionByZero when B₂ = 0 (use bang_bang_control).
ControlField project_control(const ScalarField& u, const ScalarField& p,
                             const ModelParams& params);

/// Degenerate-cost (B₂ = 0) switching control on s = u - λ p u - B₁:
/// h = H where s > tol, 0 where s < -tol, H/2 on the band |s| ≤ tol with
/// tol = 1e-8·K.
ControlField bang_bang_control(const ScalarField& u, const ScalarField& p,
                               const ModelParams& params);

/// Max of |u - λ p u - B₁ - 2 B₂ h| over nodes where h is strictly inside
/// (margin, H - margin); zero when no node is interior. At a projection
/// fixed point this is the stationarity defect of the payoff derivative.
double stationarity_residual(const ControlField& h, const ScalarField& u,
                             const ScalarField& p, const ModelParams& params,
                             double margin = 1e-6);

struct SweepOptions {
    double omega = 0.5;   // under-relaxation; halved after two consecutive
                          // increases of the control step
    double tol = 1e-9;    // on ‖h_{k+1}-h_k‖_∞
    int max_iters = 500;
    bool bang_bang = false;  // required when B₂ = 0
    StateOptions state;
};

struct SweepResult {
    ControlField h_opt;
    ScalarField u_opt;
    ScalarField p_opt;
    std::vector<double> J_trace;
    std::vector<double> step_trace;  // ‖h_{k+1} - h_k‖_∞ per iteration
    double fixed_point_residual = 0.0;  // ‖h_opt - Π(u_opt, p_opt)‖_∞
    int iterations = 0;
    bool converged = false;
    double J = 0.0;
    double omega_final = 0.0;
};

/// Forward-backward sweep for the optimality system: alternate the maximal
/// state solve, the adjoint solve, and the relaxed control update
/// h_{k+1} = (1-ω) h_k + ω Π(u_k, p_k). After the stopping rule fires the
/// control is replaced by the pure projection of the last pair and the state,
/// adjoint and fixed-point residual are re-evaluated at it, so a control
/// pinned at a box face comes out exact. Non-convergence is returned in the
/// flag, not thrown; solver errors propagate.
SweepResult forward_backward_sweep(const ControlField& h0, const GridSpec& grid,
                                   const ModelParams& params,
                                   const SweepOptions& opts = {});

struct OracleResult {
    ControlField h_best;
    double J_best = 0.0;
    std::vector<double> J_all;  // candidate payoffs in enumeration order
};

/// Independent maximizer over piecewise-constant controls: `partitions`
/// equal subintervals of the x-extent, every combination of the given
/// levels. Throws TooManyCombinations past 10⁴ candidates. Ties keep the
/// earliest candidate, so the result is deterministic.
OracleResult brute_force_oracle(int partitions, const std::vector<double>& levels,
                                const GridSpec& grid, const ModelParams& params);

struct GradientCheckReport {
    std::vector<double> epsilons;
    std::vector<double> fd_values;      // (J(h+εγ) - J(h))/ε
    double analytic = 0.0;              // ∫ γ (u - λ u p - B₁ - 2 B₂ h)
    std::vector<double> discrepancies;  // |fd - analytic|
    double slope = 0.0;  // log-log slope of the discrepancy vs ε (≈ 1)
};

/// Compares the finite-difference payoff derivative in direction gamma
/// against the analytic expression from the adjoint. Every h + εγ must be
/// admissible; otherwise ConstraintViolation.
GradientCheckReport gradient_check(const ControlField& h, const ScalarField& gamma,
                                   const GridSpec& grid, const ModelParams& params,
                                   const std::vector<double>& epsilons = {1e-2, 1e-3, 1e-4});

}  // namespace harvest
