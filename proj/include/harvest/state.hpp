#pragma once

#include "harvest/model.hpp"
#include "harvest/operators.hpp"

namespace harvest {

/// Harvesting effort: a ScalarField constrained to the box [0, cap].
struct ControlField {
    ScalarField field;
    double cap = 0.0;

    ControlField() = default;
    /// Validates 0 ≤ value ≤ cap at every node (tolerance 1e-12·cap) and
    /// snaps within-tolerance excursions back onto the box.
    ControlField(ScalarField f, double cap_);

    static ControlField constant(const GridSpec& grid, double value, double cap_);

    int size() const { return field.size(); }
    double operator[](size_t k) const { return field[k]; }
};

struct StateOptions {
    double step_tol = 1e-11;       // relative to K, on ‖u_{n+1}-u_n‖_∞
    int max_iters = 100000;
    bool newton_polish = true;     // refine to residual 1e-12·λ afterwards
    double extinct_tol = 1e-8;     // relative to K, on ‖u‖_∞
};

struct StateSolution {
    ScalarField u;
    ControlField control;
    int iterations = 0;
    double residual = 0.0;  // ‖-Δu - λ f_h(u)‖_∞, discrete rows
    double bracket_lo = 0.0;  // K(1-H)/2
    double bracket_hi = 0.0;  // K
    bool extinct = false;
};

/// Solves -Δu = λ f_α(u) for a constant effort α by monotone iteration
/// descending from the constant supersolution K:
///   (-Δ + σ) u_{n+1} = λ f_α(u_n) + σ u_n,  σ = λ(3+c+H),
/// stopping on ‖u_{n+1}-u_n‖_∞ ≤ step_tol·K. The iterates are pointwise
/// nonincreasing; a violation throws NotMonotone. Returns extinct = true
/// when the sequence collapses below extinct_tol·K (λ below the existence
/// threshold), in which case no positive solution is reported.
StateSolution solve_autonomous(double alpha, const GridSpec& grid,
                               const ModelParams& params, const StateOptions& opts = {});

/// Solves the state equation for a control h. from_above = true iterates
/// down from K and returns the maximal solution (the default everywhere);
/// from_above = false iterates up from the autonomous solution u_H and
/// returns the minimal one (uniqueness diagnostics only).
StateSolution solve_state(const ControlField& h, const GridSpec& grid,
                          const ModelParams& params, bool from_above = true,
                          const StateOptions& opts = {});

/// Damped Newton on the discrete residual R(u) = -Δu - λ f_h(u), Jacobian
/// -Δ - λ f_h'(u). Steps are halved until the residual decreases; stops at
/// ‖R‖_∞ ≤ 1e-12·λ. Throws JacobianSingular on a zero pivot and Diverged
/// after 50 steps (or when no damping factor helps).
StateSolution newton_refine(const ScalarField& u0, const ControlField& h,
                            const GridSpec& grid, const ModelParams& params);

}  // namespace harvest
