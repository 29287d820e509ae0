#include "harvest/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace harvest {

double payoff(const ControlField& h, const ScalarField& u, const ModelParams& params) {
    require_same_grid(h.field, u);
    const std::vector<double> w = quadrature_weights(u.grid);
    double J = 0.0;
    for (size_t k = 0; k < w.size(); ++k) {
        const double hv = h[k];
        J += w[k] * (hv * u[k] - (params.B1 + params.B2 * hv) * hv);
    }
    return J;
}

ControlField project_control(const ScalarField& u, const ScalarField& p,
                             const ModelParams& params) {
    if (params.B2 == 0.0)
        throw DivisionByZero("project_control needs B2 > 0; use bang_bang_control");
    require_same_grid(u, p);
    ScalarField h(u.grid);
    for (size_t k = 0; k < h.values.size(); ++k) {
        const double raw =
            (u[k] - params.lambda * p[k] * u[k] - params.B1) / (2.0 * params.B2);
        h.values[k] = std::min(params.H, std::max(0.0, raw));
    }
    return ControlField(std::move(h), params.H);
}

ControlField bang_bang_control(const ScalarField& u, const ScalarField& p,
                               const ModelParams& params) {
    require_same_grid(u, p);
    const double tol_switch = 1e-8 * params.K;
    ScalarField h(u.grid);
    for (size_t k = 0; k < h.values.size(); ++k) {
        const double s = u[k] - params.lambda * p[k] * u[k] - params.B1;
        if (s > tol_switch)
            h.values[k] = params.H;
        else if (s < -tol_switch)
            h.values[k] = 0.0;
        else
            h.values[k] = 0.5 * params.H;  // admissible midpoint on the band
    }
    return ControlField(std::move(h), params.H);
}

double stationarity_residual(const ControlField& h, const ScalarField& u,
                             const ScalarField& p, const ModelParams& params,
                             double margin) {
    require_same_grid(h.field, u);
    require_same_grid(u, p);
    double m = 0.0;
    for (size_t k = 0; k < u.values.size(); ++k) {
        const double hv = h[k];
        if (hv <= margin || hv >= params.H - margin) continue;
        const double s = u[k] - params.lambda * p[k] * u[k] - params.B1 -
                         2.0 * params.B2 * hv;
        m = std::max(m, std::abs(s));
    }
    return m;
}

SweepResult forward_backward_sweep(const ControlField& h0, const GridSpec& grid,
                                   const ModelParams& params, const SweepOptions& opts) {
    params.validate();
    if (!opts.bang_bang && params.B2 == 0.0)
        throw DivisionByZero("B2 = 0 requires the bang-bang sweep mode");
    if (!(h0.field.grid == grid))
        throw Error("sweep start control does not live on the target grid");

    auto next_control = [&](const ScalarField& u, const ScalarField& p) {
        return opts.bang_bang ? bang_bang_control(u, p, params)
                              : project_control(u, p, params);
    };

    SweepResult res;
    ControlField h = h0;
    double omega = opts.omega;
    double diff_prev = std::numeric_limits<double>::infinity();
    int oscillations = 0;

    ScalarField u_last, p_last;
    for (int k = 1; k <= opts.max_iters; ++k) {
        StateSolution state = solve_state(h, grid, params, true, opts.state);
        if (state.extinct)
            throw Extinct("state solution collapsed during the sweep; "
                          "lambda below the existence threshold");
        AdjointSolution adj = solve_adjoint(state.u, h, params);
        res.J_trace.push_back(payoff(h, state.u, params));
        u_last = std::move(state.u);
        p_last = std::move(adj.p);

        const ControlField target = next_control(u_last, p_last);
        double raw_diff = 0.0, diff = 0.0;
        ScalarField hnew(grid);
        for (int i = 0; i < hnew.size(); ++i) {
            raw_diff = std::max(raw_diff, std::abs(target[i] - h[i]));
            hnew.values[i] = (1.0 - omega) * h[i] + omega * target[i];
            diff = std::max(diff, std::abs(hnew.values[i] - h[i]));
        }
        h = ControlField(std::move(hnew), params.H);
        res.step_trace.push_back(diff);
        res.iterations = k;

        // The raw projection distance bounds the post-polish fixed-point
        // residual, so it participates in the stopping rule.
        if (diff <= opts.tol && raw_diff <= 10.0 * opts.tol) {
            res.converged = true;
            break;
        }
        if (diff > diff_prev) {
            if (++oscillations >= 2) {
                omega = std::max(omega / 2.0, 1.0 / 64.0);
                oscillations = 0;
            }
        } else {
            oscillations = 0;
        }
        diff_prev = diff;
    }

    // Final polish: the optimality system characterizes h as the exact
    // projection, so report that rather than the last relaxed iterate.
    // Controls pinned at a box face come out exact (a zero control is zero,
    // not 1e-9).
    res.h_opt = next_control(u_last, p_last);
    StateSolution final_state = solve_state(res.h_opt, grid, params, true, opts.state);
    if (final_state.extinct)
        throw Extinct("state solution collapsed during the sweep polish");
    AdjointSolution final_adj = solve_adjoint(final_state.u, res.h_opt, params);
    res.u_opt = std::move(final_state.u);
    res.p_opt = std::move(final_adj.p);
    res.fixed_point_residual =
        norm_inf_diff(res.h_opt.field, next_control(res.u_opt, res.p_opt).field);
    res.J = payoff(res.h_opt, res.u_opt, params);
    res.J_trace.push_back(res.J);
    res.omega_final = omega;
    return res;
}

OracleResult brute_force_oracle(int partitions, const std::vector<double>& levels,
                                const GridSpec& grid, const ModelParams& params) {
    if (partitions < 1)
        throw ConstraintViolation("partitions", "must be >= 1");
    if (levels.empty())
        throw ConstraintViolation("levels", "need at least one level");
    for (double lv : levels)
        if (lv < 0.0 || lv > params.H)
            throw ConstraintViolation("levels", "level " + std::to_string(lv) +
                                                    " outside [0, H]");
    const double combos_d = std::pow(static_cast<double>(levels.size()), partitions);
    if (combos_d > 1e4)
        throw TooManyCombinations("brute force would enumerate " +
                                  std::to_string(combos_d) + " controls (cap 10^4)");
    const long combos = static_cast<long>(std::llround(combos_d));

    // Precompute each node's strip along x.
    const int n = grid.node_count();
    std::vector<int> strip(static_cast<size_t>(n));
    const double a = grid.x_extent[0], b = grid.x_extent[1];
    for (int j = 0; j < (grid.dim == 2 ? grid.ny : 1); ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double t = (grid.x(i) - a) / (b - a);
            strip[grid.index(i, j)] =
                std::min(partitions - 1, static_cast<int>(t * partitions));
        }

    OracleResult res;
    res.J_all.reserve(static_cast<size_t>(combos));
    const long base = static_cast<long>(levels.size());
    for (long cand = 0; cand < combos; ++cand) {
        // Decode candidate index, strip 0 most significant.
        std::vector<double> level_of(static_cast<size_t>(partitions));
        long rem = cand;
        for (int s = partitions - 1; s >= 0; --s) {
            level_of[s] = levels[static_cast<size_t>(rem % base)];
            rem /= base;
        }
        ScalarField hf(grid);
        for (int k = 0; k < n; ++k) hf.values[k] = level_of[strip[k]];
        ControlField h(std::move(hf), params.H);

        const StateSolution state = solve_state(h, grid, params);
        const double J = payoff(h, state.u, params);
        res.J_all.push_back(J);
        if (res.J_all.size() == 1 || J > res.J_best) {
            res.J_best = J;
            res.h_best = h;
        }
    }
    return res;
}

GradientCheckReport gradient_check(const ControlField& h, const ScalarField& gamma,
                                   const GridSpec& grid, const ModelParams& params,
                                   const std::vector<double>& epsilons) {
    require_same_grid(h.field, gamma);
    for (double eps : epsilons)
        for (int k = 0; k < h.size(); ++k) {
            const double v = h[k] + eps * gamma[k];
            if (v < -1e-12 || v > params.H + 1e-12)
                throw ConstraintViolation(
                    "gamma", "h + eps*gamma leaves the admissible box at eps = " +
                                 std::to_string(eps));
        }

    GradientCheckReport rep;
    rep.epsilons = epsilons;

    const StateSolution base = solve_state(h, grid, params);
    const AdjointSolution adj = solve_adjoint(base.u, h, params);
    const double J0 = payoff(h, base.u, params);

    const std::vector<double> w = quadrature_weights(grid);
    double analytic = 0.0;
    for (int k = 0; k < h.size(); ++k) {
        const double du = base.u[k] - params.lambda * base.u[k] * adj.p[k] -
                          params.B1 - 2.0 * params.B2 * h[k];
        analytic += w[k] * gamma[k] * du;
    }
    rep.analytic = analytic;

    for (double eps : epsilons) {
        ScalarField hf = h.field;
        for (int k = 0; k < h.size(); ++k) hf.values[k] += eps * gamma[k];
        ControlField he(std::move(hf), params.H);
        const StateSolution pert = solve_state(he, grid, params);
        const double fd = (payoff(he, pert.u, params) - J0) / eps;
        rep.fd_values.push_back(fd);
        rep.discrepancies.push_back(std::abs(fd - analytic));
    }

    // Least-squares slope of log|discrepancy| against log eps; zero when the
    // discrepancy sits at rounding level (e.g. gamma = 0).
    std::vector<double> lx, ly;
    for (size_t i = 0; i < epsilons.size(); ++i) {
        if (rep.discrepancies[i] <= 1e-14 * std::max(1.0, std::abs(J0))) continue;
        lx.push_back(std::log(epsilons[i]));
        ly.push_back(std::log(rep.discrepancies[i]));
    }
    if (lx.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= lx.size();
        my /= ly.size();
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < lx.size(); ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        rep.slope = num / den;
    }
    return rep;
}

}  // namespace harvest
