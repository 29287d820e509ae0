#include "harvest/adjoint.hpp"

#include <cmath>

namespace harvest {

namespace {

// Relative L2 residual of (-Δ + V) x = rhs; absolute when rhs vanishes.
double linear_residual(const DiscreteOperator& op, const ScalarField& x,
                       const ScalarField& rhs) {
    const ScalarField ax = op.apply(x);
    ScalarField r = ax;
    for (size_t k = 0; k < r.values.size(); ++k) r.values[k] -= rhs[k];
    const double rn = norm_l2(r);
    const double bn = norm_l2(rhs);
    return bn > 0.0 ? rn / bn : rn;
}

EigenPair coercivity_guard(const GridSpec& grid, const ScalarField& potential,
                           const ModelParams& params) {
    EigenPair pair = principal_eigenvalue(grid, params.q, potential);
    if (pair.sigma1 <= 0.0)
        throw NotCoercive("sigma1(V) = " + std::to_string(pair.sigma1) +
                          " <= 0; adjoint/sensitivity problem outside the "
                          "solvable regime");
    return pair;
}

}  // namespace

AdjointSolution solve_adjoint(const ScalarField& u, const ControlField& h,
                              const ModelParams& params) {
    require_same_grid(u, h.field);
    AdjointSolution sol;
    sol.potential = adjoint_potential(u, h.field, params);
    sol.sigma1_check = coercivity_guard(u.grid, sol.potential, params).sigma1;

    const DiscreteOperator op = assemble(u.grid, params.q, sol.potential);
    sol.p = op.solve(h.field);
    sol.residual = linear_residual(op, sol.p, h.field);
    return sol;
}

ScalarField solve_sensitivity(const ScalarField& u, const ControlField& h,
                              const ScalarField& gamma, const ModelParams& params) {
    require_same_grid(u, h.field);
    require_same_grid(u, gamma);
    const ScalarField potential = adjoint_potential(u, h.field, params);
    coercivity_guard(u.grid, potential, params);

    const DiscreteOperator op = assemble(u.grid, params.q, potential);
    ScalarField rhs(u.grid);
    for (size_t k = 0; k < rhs.values.size(); ++k)
        rhs.values[k] = -params.lambda * gamma[k] * u[k];
    return op.solve(rhs);
}

}  // namespace harvest
