#include "harvest/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "harvest/adjoint.hpp"
#include "harvest/eigenpair.hpp"
#include "harvest/optimize.hpp"

namespace harvest {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

const char* error_name(const Error& e) {
    if (dynamic_cast<const UnknownKey*>(&e)) return "UnknownKey";
    if (dynamic_cast<const TypeMismatch*>(&e)) return "TypeMismatch";
    if (dynamic_cast<const ConstraintViolation*>(&e)) return "ConstraintViolation";
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const NoSignChange*>(&e)) return "NoSignChange";
    if (dynamic_cast<const NotPositiveDefinite*>(&e)) return "NotPositiveDefinite";
    if (dynamic_cast<const NotCoercive*>(&e)) return "NotCoercive";
    if (dynamic_cast<const Extinct*>(&e)) return "Extinct";
    if (dynamic_cast<const GridTooCoarse*>(&e)) return "GridTooCoarse";
    if (dynamic_cast<const TooManyCombinations*>(&e)) return "TooManyCombinations";
    if (dynamic_cast<const DivisionByZero*>(&e)) return "DivisionByZero";
    if (dynamic_cast<const MaxIterations*>(&e)) return "MaxIterations";
    if (dynamic_cast<const NotMonotone*>(&e)) return "NotMonotone";
    if (dynamic_cast<const JacobianSingular*>(&e)) return "JacobianSingular";
    if (dynamic_cast<const Diverged*>(&e)) return "Diverged";
    if (dynamic_cast<const NotConverged*>(&e)) return "NotConverged";
    return "Error";
}

class Report {
public:
    void add(const std::string& key, const std::string& value) {
        lines_.push_back(key + " = " + value);
    }
    void add(const std::string& key, double value) { add(key, format_full(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) {
        add(key, std::string(value ? "true" : "false"));
    }
    void write(const std::filesystem::path& path) const {
        std::ofstream out(path);
        for (const std::string& l : lines_) out << l << "\n";
    }

private:
    std::vector<std::string> lines_;
};

using Column = std::pair<std::string, const ScalarField*>;

void write_fields_csv(const std::filesystem::path& path, const GridSpec& grid,
                      const std::vector<Column>& columns) {
    std::ofstream out(path);
    out << "x";
    if (grid.dim == 2) out << ",y";
    for (const Column& c : columns) out << "," << c.first;
    out << "\n";
    const int ny = grid.dim == 2 ? grid.ny : 1;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            out << format_full(grid.x(i));
            if (grid.dim == 2) out << "," << format_full(grid.y(j));
            for (const Column& c : columns)
                out << "," << format_full((*c.second)[grid.index(i, j)]);
            out << "\n";
        }
    }
}

void write_trace_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    out << header << "\n";
    for (const std::vector<double>& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_full(row[i]);
        }
        out << "\n";
    }
}

void add_params(Report& rep, const RunConfig& cfg) {
    rep.add("mode", to_string(cfg.mode));
    rep.add("lambda", cfg.params.lambda);
    rep.add("K", cfg.params.K);
    rep.add("c", cfg.params.c);
    rep.add("q", cfg.params.q);
    rep.add("H", cfg.params.H);
    rep.add("B1", cfg.params.B1);
    rep.add("B2", cfg.params.B2);
    rep.add("dim", cfg.dim);
    rep.add("nx", cfg.nx);
    if (cfg.dim == 2) rep.add("ny", cfg.ny);
    rep.add("seed", std::to_string(cfg.seed));
}

void add_wellposedness(Report& rep, const WellposednessReport& wp) {
    rep.add("wellposed.c_bound_ok", wp.c_bound_ok);
    rep.add("wellposed.x0", wp.x0);
    rep.add("wellposed.K_bar", wp.K_bar);
    rep.add("wellposed.K_ok", wp.K_ok);
    rep.add("wellposed.lambda_threshold", wp.lambda_threshold);
    rep.add("wellposed.lambda_ok", wp.lambda_ok);
    for (const auto& [alpha, r0] : wp.r0_values)
        rep.add("wellposed.r0(" + format_full(alpha) + ")", r0);
}

ControlField start_control(const RunConfig& cfg, const GridSpec& grid) {
    const double H = cfg.params.H;
    if (cfg.sweep_start == "zero") return ControlField::constant(grid, 0.0, H);
    if (cfg.sweep_start == "cap") return ControlField::constant(grid, H, H);
    if (cfg.sweep_start == "half") return ControlField::constant(grid, H / 2.0, H);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(0.0, H);
    ScalarField f(grid);
    for (double& v : f.values) v = dist(rng);
    return ControlField(std::move(f), H);
}

StateOptions state_options(const RunConfig& cfg) {
    StateOptions opts;
    opts.step_tol = cfg.state_tol;
    opts.max_iters = cfg.state_max_iters;
    opts.newton_polish = cfg.newton_polish;
    return opts;
}

// Manufactured-solution convergence sweep for the verify mode:
// u(x) = sin(x) + 2 with inhomogeneous Robin data, V = 0.
double mms_error(double q, int n) {
    const GridSpec grid = GridSpec::interval(0.0, 1.0, n);
    const DiscreteOperator op = assemble(grid, q, ScalarField(grid, 0.0));
    ScalarField rhs(grid), bdata(grid), exact(grid);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        exact.values[i] = std::sin(x) + 2.0;
        rhs.values[i] = std::sin(x);
    }
    bdata.values[0] = -std::cos(0.0) + q * (std::sin(0.0) + 2.0);
    bdata.values[n - 1] = std::cos(1.0) + q * (std::sin(1.0) + 2.0);
    const ScalarField u = op.solve(rhs, &bdata);
    return norm_inf_diff(u, exact);
}

int run_mode(const RunConfig& cfg, const std::filesystem::path& dir, Report& rep) {
    const GridSpec grid = cfg.grid();
    const ModelParams& params = cfg.params;

    if (cfg.mode == RunMode::verify) {
        const std::vector<int> ns{33, 65, 129, 257};
        std::vector<std::vector<double>> rows;
        double prev = 0.0;
        for (size_t i = 0; i < ns.size(); ++i) {
            const double err = mms_error(params.q, ns[i]);
            const double order = i ? std::log2(prev / err) : 0.0;
            rows.push_back({static_cast<double>(ns[i]), err, order});
            if (i) rep.add("verify.order(n=" + std::to_string(ns[i]) + ")", order);
            prev = err;
        }
        write_trace_csv(dir / "trace.csv", "n,linf_error,order", rows);
        rep.add("status", std::string("ok"));
        return 0;
    }

    const EigenPair base_mode =
        principal_eigenvalue(grid, params.q, ScalarField(grid, 0.0),
                             {cfg.eigen_tol, cfg.eigen_max_iters});
    const WellposednessReport wp = wellposedness(params, base_mode.sigma1);
    rep.add("lambda1", base_mode.sigma1);
    add_wellposedness(rep, wp);

    switch (cfg.mode) {
        case RunMode::wellposed: {
            rep.add("status", std::string("ok"));
            return 0;
        }

        case RunMode::eigen: {
            rep.add("lambda1.iterations", base_mode.iterations);
            rep.add("lambda1.residual", base_mode.residual);
            rep.add("lambda1.phi_sup", base_mode.phi_sup);
            const ControlField h =
                ControlField::constant(grid, cfg.control_level(), params.H);
            const StateSolution state = solve_state(h, grid, params, true,
                                                    state_options(cfg));
            if (state.extinct) throw Extinct("state collapsed; no positive solution");
            const ScalarField V1 = state_potential(state.u, h.field, params);
            const ScalarField Va = adjoint_potential(state.u, h.field, params);
            const EigenPair e1 = principal_eigenvalue(grid, params.q, V1,
                                                      {cfg.eigen_tol, cfg.eigen_max_iters});
            const EigenPair ea = principal_eigenvalue(grid, params.q, Va,
                                                      {cfg.eigen_tol, cfg.eigen_max_iters});
            rep.add("sigma1.state_potential", e1.sigma1);
            rep.add("sigma1.adjoint_potential", ea.sigma1);
            rep.add("status", std::string("ok"));
            return 0;
        }

        case RunMode::state: {
            const ControlField h =
                ControlField::constant(grid, cfg.control_level(), params.H);
            const StateSolution state = solve_state(h, grid, params, true,
                                                    state_options(cfg));
            write_fields_csv(dir / "fields.csv", grid,
                             {{"u", &state.u}, {"h", &h.field}});
            rep.add("state.iterations", state.iterations);
            rep.add("state.residual", state.residual);
            rep.add("state.extinct", state.extinct);
            if (state.extinct)
                throw Extinct("state collapsed; lambda below the existence threshold");
            rep.add("state.min", *std::min_element(state.u.values.begin(),
                                                   state.u.values.end()));
            rep.add("state.max", norm_inf(state.u));
            rep.add("state.bracket_lo", state.bracket_lo);
            rep.add("state.bracket_hi", state.bracket_hi);
            rep.add("status", std::string("ok"));
            return 0;
        }

        case RunMode::adjoint: {
            const ControlField h =
                ControlField::constant(grid, cfg.control_level(), params.H);
            const StateSolution state = solve_state(h, grid, params, true,
                                                    state_options(cfg));
            if (state.extinct) throw Extinct("state collapsed; no positive solution");
            const AdjointSolution adj = solve_adjoint(state.u, h, params);
            // Sensitivity in the effort-reducing direction, admissible at h = H.
            const ScalarField gamma(grid, -1.0);
            const ScalarField psi = solve_sensitivity(state.u, h, gamma, params);
            write_fields_csv(dir / "fields.csv", grid,
                             {{"u", &state.u}, {"p", &adj.p}, {"h", &h.field},
                              {"psi", &psi}});
            rep.add("adjoint.sigma1_check", adj.sigma1_check);
            rep.add("adjoint.residual", adj.residual);
            rep.add("adjoint.p_sup", norm_inf(adj.p));
            rep.add("status", std::string("ok"));
            return 0;
        }

        case RunMode::optimize: {
            SweepOptions opts;
            opts.omega = cfg.omega;
            opts.tol = cfg.sweep_tol;
            opts.max_iters = cfg.sweep_max_iters;
            opts.bang_bang = (params.B2 == 0.0);
            opts.state = state_options(cfg);
            const SweepResult res =
                forward_backward_sweep(start_control(cfg, grid), grid, params, opts);

            write_fields_csv(dir / "fields.csv", grid,
                             {{"u", &res.u_opt}, {"p", &res.p_opt},
                              {"h", &res.h_opt.field}});
            std::vector<std::vector<double>> rows;
            for (size_t i = 0; i < res.J_trace.size(); ++i) {
                const double step = i < res.step_trace.size()
                                        ? res.step_trace[i]
                                        : res.fixed_point_residual;
                rows.push_back({static_cast<double>(i + 1), res.J_trace[i], step});
            }
            write_trace_csv(dir / "trace.csv", "iter,J,control_step", rows);

            rep.add("optimize.J", res.J);
            rep.add("optimize.iterations", res.iterations);
            rep.add("optimize.converged", res.converged);
            rep.add("optimize.fixed_point_residual", res.fixed_point_residual);
            rep.add("optimize.h_min", *std::min_element(res.h_opt.field.values.begin(),
                                                        res.h_opt.field.values.end()));
            rep.add("optimize.h_max", norm_inf(res.h_opt.field));
            rep.add("optimize.p_sup", norm_inf(res.p_opt));
            rep.add("optimize.omega_final", res.omega_final);

            for (double b2 : cfg.b2_sweep) {
                ModelParams p2 = params;
                p2.B2 = b2;
                const SweepResult r2 =
                    forward_backward_sweep(start_control(cfg, grid), grid, p2, opts);
                const std::string tag = "optimize.b2(" + format_full(b2) + ")";
                rep.add(tag + ".J", r2.J);
                rep.add(tag + ".p_sup", norm_inf(r2.p_opt));
                rep.add(tag + ".p_sup_times_b2", norm_inf(r2.p_opt) * b2);
                rep.add(tag + ".converged", r2.converged);
            }

            if (!res.converged)
                throw NotConverged("sweep hit the iteration cap before the control "
                                   "step dropped below tolerance", res.J_trace);
            rep.add("status", std::string("ok"));
            return 0;
        }

        case RunMode::oracle: {
            const OracleResult res = brute_force_oracle(
                cfg.oracle_partitions, cfg.levels_or_default(), grid, params);
            const StateSolution best = solve_state(res.h_best, grid, params, true,
                                                   state_options(cfg));
            write_fields_csv(dir / "fields.csv", grid,
                             {{"u", &best.u}, {"h", &res.h_best.field}});
            std::vector<std::vector<double>> rows;
            for (size_t i = 0; i < res.J_all.size(); ++i)
                rows.push_back({static_cast<double>(i), res.J_all[i]});
            write_trace_csv(dir / "trace.csv", "candidate,J", rows);
            rep.add("oracle.J_best", res.J_best);
            rep.add("oracle.candidates", static_cast<int>(res.J_all.size()));
            rep.add("status", std::string("ok"));
            return 0;
        }

        default:
            throw Error("unhandled mode");
    }
}

}  // namespace

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 1;
    if (dynamic_cast<const GridTooCoarse*>(&e)) return 1;
    if (dynamic_cast<const TooManyCombinations*>(&e)) return 1;
    if (dynamic_cast<const DivisionByZero*>(&e)) return 1;
    if (dynamic_cast<const NotConverged*>(&e)) return 2;
    if (dynamic_cast<const MaxIterations*>(&e)) return 2;
    if (dynamic_cast<const NotMonotone*>(&e)) return 2;
    if (dynamic_cast<const JacobianSingular*>(&e)) return 2;
    if (dynamic_cast<const Diverged*>(&e)) return 2;
    return 3;
}

int run(const RunConfig& config) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    Report rep;
    add_params(rep, config);
    try {
        const int code = run_mode(config, dir, rep);
        rep.write(dir / "report.txt");
        return code;
    } catch (const Error& e) {
        rep.add("status", std::string("error"));
        rep.add("error.type", std::string(error_name(e)));
        rep.add("error.message", std::string(e.what()));
        rep.write(dir / "report.txt");
        return exit_code_for(e);
    }
}

}  // namespace harvest
