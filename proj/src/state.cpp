#include "harvest/state.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace harvest {

ControlField::ControlField(ScalarField f, double cap_) : field(std::move(f)), cap(cap_) {
    if (!(cap > 0.0))
        throw ConstraintViolation("H", "control cap must be > 0");
    const double tol = 1e-12 * cap;
    for (double& v : field.values) {
        if (v < -tol || v > cap + tol)
            throw ConstraintViolation(
                "h", "control value " + std::to_string(v) + " outside [0, " +
                         std::to_string(cap) + "]");
        v = std::min(std::max(v, 0.0), cap);
    }
}

ControlField ControlField::constant(const GridSpec& grid, double value, double cap_) {
    return ControlField(ScalarField(grid, value), cap_);
}

namespace {

// ‖-Δu - λ f_h(u)‖_∞ over the discrete rows (boundary rows included).
double state_residual_inf(const DiscreteOperator& laplacian, const ScalarField& u,
                          const ControlField& h, const ModelParams& params) {
    const ScalarField au = laplacian.apply(u);
    double m = 0.0;
    for (size_t k = 0; k < u.values.size(); ++k)
        m = std::max(m, std::abs(au[k] - params.lambda * reaction(u[k], h[k], params)));
    return m;
}

StateSolution monotone_solve(const ControlField& h, const GridSpec& grid,
                             const ModelParams& params, const StateOptions& opts,
                             ScalarField start, bool descending) {
    params.validate();
    const DiscreteOperator laplacian = assemble(grid, params.q, ScalarField(grid, 0.0));
    const double sigma = params.lambda * (3.0 + params.c + params.H);
    const double step_tol = opts.step_tol * params.K;
    const double mono_slack = 1e-12 * params.K;

    StateSolution sol;
    sol.control = h;
    sol.bracket_lo = params.K * (1.0 - params.H) / 2.0;
    sol.bracket_hi = params.K;

    ScalarField u = std::move(start);
    ScalarField rhs(grid);
    int it = 0;
    for (it = 1; it <= opts.max_iters; ++it) {
        for (size_t k = 0; k < rhs.values.size(); ++k)
            rhs.values[k] = params.lambda * reaction(u[k], h[k], params) + sigma * u[k];
        ScalarField next = laplacian.solve(rhs, nullptr, sigma);

        double step = 0.0;
        for (size_t k = 0; k < next.values.size(); ++k) {
            const double d = next[k] - u[k];
            if (descending ? d > mono_slack : d < -mono_slack)
                throw NotMonotone("monotone iteration produced a non-monotone step");
            step = std::max(step, std::abs(d));
        }
        u = std::move(next);

        if (norm_inf(u) < opts.extinct_tol * params.K) {
            sol.u = u;
            sol.iterations = it;
            sol.residual = state_residual_inf(laplacian, u, h, params);
            sol.extinct = true;
            return sol;
        }
        if (step <= step_tol) break;
    }
    if (it > opts.max_iters)
        throw MaxIterations("monotone state iteration exceeded " +
                            std::to_string(opts.max_iters) + " iterations");

    sol.u = std::move(u);
    sol.iterations = it;
    sol.residual = state_residual_inf(laplacian, sol.u, h, params);

    if (opts.newton_polish) {
        StateSolution refined = newton_refine(sol.u, h, grid, params);
        refined.iterations = sol.iterations;
        return refined;
    }
    return sol;
}

}  // namespace

StateSolution solve_autonomous(double alpha, const GridSpec& grid,
                               const ModelParams& params, const StateOptions& opts) {
    if (alpha < 0.0 || alpha > params.H)
        throw ConstraintViolation("alpha", "effort level must lie in [0, H]");
    // Constant controls are admissible for any positive cap; use H as the cap
    // so alpha = 0 stays representable.
    const ControlField h = ControlField::constant(grid, alpha, params.H);
    return monotone_solve(h, grid, params, opts, ScalarField(grid, params.K), true);
}

StateSolution solve_state(const ControlField& h, const GridSpec& grid,
                          const ModelParams& params, bool from_above,
                          const StateOptions& opts) {
    if (!(h.field.grid == grid))
        throw Error("control field does not live on the target grid");
    if (from_above)
        return monotone_solve(h, grid, params, opts, ScalarField(grid, params.K), true);

    // Minimal solution: climb from the autonomous full-effort solution,
    // which is the subsolution anchor of the existence construction.
    StateOptions sub_opts = opts;
    sub_opts.newton_polish = true;
    StateSolution base = solve_autonomous(params.H, grid, params, sub_opts);
    if (base.extinct) {
        base.control = h;
        return base;
    }
    return monotone_solve(h, grid, params, opts, base.u, false);
}

StateSolution newton_refine(const ScalarField& u0, const ControlField& h,
                            const GridSpec& grid, const ModelParams& params) {
    if (!(u0.grid == grid))
        throw Error("newton_refine: field does not live on the target grid");
    const DiscreteOperator laplacian = assemble(grid, params.q, ScalarField(grid, 0.0));
    // The second-difference rows cannot beat the rounding floor ~K*eps/h^2,
    // which overtakes 1e-12*lambda on fine grids.
    const double h_min = grid.dim == 2 ? std::min(grid.hx(), grid.hy()) : grid.hx();
    const double fd_floor =
        2.0 * params.K * std::numeric_limits<double>::epsilon() / (h_min * h_min);
    const double target = std::max(1e-12 * params.lambda, fd_floor);

    StateSolution sol;
    sol.control = h;
    sol.bracket_lo = params.K * (1.0 - params.H) / 2.0;
    sol.bracket_hi = params.K;

    ScalarField u = u0;
    auto residual_field = [&](const ScalarField& v) {
        ScalarField r = laplacian.apply(v);
        for (size_t k = 0; k < r.values.size(); ++k)
            r.values[k] -= params.lambda * reaction(v[k], h[k], params);
        return r;
    };

    ScalarField r = residual_field(u);
    double rnorm = norm_inf(r);
    int steps = 0;
    while (rnorm > target) {
        if (++steps > 50)
            throw Diverged("newton_refine: no convergence after 50 steps");

        ScalarField jac_potential(grid);
        for (size_t k = 0; k < u.values.size(); ++k)
            jac_potential.values[k] =
                -params.lambda * reaction_derivative(u[k], h[k], params);
        const DiscreteOperator jac = assemble(grid, params.q, jac_potential);
        ScalarField neg_r = r;
        for (double& v : neg_r.values) v = -v;
        const ScalarField delta = jac.solve(neg_r);

        // Halve the step until the residual actually drops.
        bool accepted = false;
        for (double alpha = 1.0; alpha >= 0x1p-30; alpha *= 0.5) {
            ScalarField trial = u;
            for (size_t k = 0; k < trial.values.size(); ++k)
                trial.values[k] += alpha * delta[k];
            ScalarField r_trial = residual_field(trial);
            const double rn = norm_inf(r_trial);
            if (rn < rnorm) {
                u = std::move(trial);
                r = std::move(r_trial);
                rnorm = rn;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (rnorm <= 1e-9 * params.lambda) break;  // stalled at rounding level
            throw Diverged("newton_refine: damping failed to reduce the residual");
        }
    }

    sol.u = std::move(u);
    sol.iterations = steps;
    sol.residual = rnorm;
    sol.extinct = norm_inf(sol.u) < 1e-8 * params.K;
    return sol;
}

}  // namespace harvest
