#pragma once

#include <map>

#include "harvest/errors.hpp"

namespace harvest {

/// Scalar model constants for the harvested-population equation
///   -Δu = λ [ u - u²/K - c u²/(1+u²) - h(x) u ],  ∂u/∂η + q u = 0.
/// λ is kept separate from the reaction term so operators can scale f and f'
/// uniformly.
struct ModelParams {
    double lambda = 500.0;  // inverse diffusion
    double K = 20.0;        // carrying capacity
    double c = 0.5;         // grazing rate
    double q = 1.0;         // Robin boundary coefficient
    double H = 0.3;         // harvesting effort cap, in (0,1)
    double B1 = 1.0;        // linear cost coefficient
    double B2 = 2.0;        // quadratic cost coefficient

    /// Basic range checks; throws ConstraintViolation naming the field.
    void validate() const;

    /// Existence/uniqueness theory needs c < 2(1-H).
    bool growth_admissible() const { return c < 2.0 * (1.0 - H); }
};

/// Reaction term f_h(s) = s - s²/K - c s²/(1+s²) - h s (without the λ
/// multiplier; callers scale).
double reaction(double s, double h_val, const ModelParams& params);

/// f_h'(s) = 1 - 2s/K - 2c s/(1+s²)² - h.
double reaction_derivative(double s, double h_val, const ModelParams& params);

/// g(x) = 1/x + c(1-x²)/(1+x²)², the one-variable lower bound for the gap
/// between the paired comparison potential and the state potential. Its last
/// positive root x₀ enters the carrying-capacity threshold K̄.
double potential_gap_bound(double x, const ModelParams& params);

/// Unique positive root r₀ of f_α, located by bisection on the bracket
/// (K(1-α)/2, K). Residual tolerance 1e-12, 200 iteration cap.
/// Throws NoSignChange when f_α does not change sign on the bracket.
double compute_r0(double alpha, const ModelParams& params);

struct WellposednessReport {
    bool c_bound_ok = false;        // c < 2(1-H)
    double x0 = 0.0;                // last root of g (0 if g > 0 on the scan)
    double K_bar = 0.0;             // max{x0, 8/(1-H)}
    bool K_ok = false;              // K > K_bar
    double lambda_threshold = 0.0;  // λ₁(Ω)/(1-H)
    bool lambda_ok = false;         // lambda > threshold
    std::map<double, double> r0_values;  // effort level α -> r₀(α)

    bool all_ok() const { return c_bound_ok && K_ok && lambda_ok; }
};

/// Evaluates the wellposedness diagnostics. lambda1 is the principal
/// eigenvalue of -Δ with Robin coefficient q on the target domain (computed
/// by the eigen module). Never throws; the report carries booleans.
WellposednessReport wellposedness(const ModelParams& params, double lambda1);

}  // namespace harvest
