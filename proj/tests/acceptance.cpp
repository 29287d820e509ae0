// Acceptance suite: desk-scale property checks on the canonical
// configuration (interval (0,1), n = 257, lambda = 500, K = 20, c = 0.5,
// q = 1, H = 0.3, B1 = 1, B2 = 2). Prints one PASS/FAIL line per criterion;
// exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "harvest/adjoint.hpp"
#include "harvest/config.hpp"
#include "harvest/optimize.hpp"
#include "oracle_helpers.hpp"

using namespace harvest;

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

struct Harness {
    int failures = 0;

    void run(int id, const std::string& name,
             const std::function<void(std::vector<std::string>&)>& body) {
        std::vector<std::string> notes;
        std::string aborted;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(notes);
        } catch (const std::exception& e) {
            aborted = e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        const bool pass = aborted.empty() && notes.empty();
        std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", id,
                    name.c_str(), secs);
        if (!aborted.empty()) std::printf("       aborted: %s\n", aborted.c_str());
        for (const std::string& n : notes) std::printf("       %s\n", n.c_str());
        if (!pass) ++failures;
    }
};

#define EXPECT(cond, note) \
    do {                   \
        if (!(cond)) notes.push_back(note); \
    } while (0)

const GridSpec kCanonical = GridSpec::interval(0.0, 1.0, 257);

double mms_smooth_error(double q, int n) {
    const GridSpec grid = GridSpec::interval(0.0, 1.0, n);
    const DiscreteOperator op = assemble(grid, q, ScalarField(grid, 0.0));
    ScalarField rhs(grid), bdata(grid), exact(grid);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        exact.values[i] = std::sin(x) + 2.0;
        rhs.values[i] = std::sin(x);
    }
    bdata.values[0] = -1.0 + q * 2.0;
    bdata.values[n - 1] = std::cos(1.0) + q * (std::sin(1.0) + 2.0);
    return norm_inf_diff(op.solve(rhs, &bdata), exact);
}

void criterion_operator(std::vector<std::string>& notes) {
    std::vector<double> hs, errs;
    for (int n : {33, 65, 129, 257}) {
        hs.push_back(1.0 / (n - 1));
        errs.push_back(mms_smooth_error(1.0, n));
    }
    const double order = oracle::loglog_slope(hs, errs);
    EXPECT(std::abs(order - 2.0) <= 0.2,
           fmt("observed order %.3f outside 2.0 +/- 0.2", order));

    for (int n : {33, 257}) {
        const GridSpec grid = GridSpec::interval(0.0, 1.0, n);
        const double q = 1.0;
        const DiscreteOperator op = assemble(grid, q, ScalarField(grid, 1.0));
        ScalarField rhs(grid), bdata(grid), exact(grid);
        for (int i = 0; i < n; ++i) {
            const double x = grid.x(i);
            exact.values[i] = x * x;
            rhs.values[i] = -2.0 + x * x;
        }
        bdata.values[n - 1] = 2.0 + q;
        const double err = norm_inf_diff(op.solve(rhs, &bdata), exact);
        EXPECT(err <= 1e-10, fmt("quadratic error %.3e above 1e-10 at n=%.0f", err,
                                 static_cast<double>(n)));
    }
}

void criterion_eigen(std::vector<std::string>& notes) {
    const GridSpec grid = GridSpec::interval(0.0, 1.0, 65);
    auto gen = oracle::rng(2024);

    const ScalarField V = oracle::random_field(grid, 0.0, 3.0, gen);
    const double base = principal_eigenvalue(grid, 1.0, V).sigma1;
    std::uniform_real_distribution<double> cdist(-4.0, 4.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double c0 = cdist(gen);
        ScalarField Vs = V;
        for (double& v : Vs.values) v += c0;
        const double got = principal_eigenvalue(grid, 1.0, Vs).sigma1;
        EXPECT(std::abs(got - (base + c0)) <= 1e-9,
               fmt("shift identity off by %.3e", std::abs(got - (base + c0))));
    }

    for (int trial = 0; trial < 50; ++trial) {
        const ScalarField V1 = oracle::random_field(grid, 0.0, 2.0, gen);
        ScalarField V2 = V1;
        const ScalarField bump = oracle::random_field(grid, 0.0, 2.0, gen);
        for (int k = 0; k < V2.size(); ++k) V2.values[k] += bump[k];
        const double s1 = principal_eigenvalue(grid, 1.0, V1).sigma1;
        const double s2 = principal_eigenvalue(grid, 1.0, V2).sigma1;
        EXPECT(s1 <= s2 + 1e-10, fmt("monotonicity violated: %.12f > %.12f", s1, s2));
    }

    const double exact = oracle::robin_lambda1_interval(1.0);
    const GridSpec g129 = GridSpec::interval(0.0, 1.0, 129);
    const double s129 =
        principal_eigenvalue(g129, 1.0, ScalarField(g129, 0.0)).sigma1;
    const double s257 =
        principal_eigenvalue(kCanonical, 1.0, ScalarField(kCanonical, 0.0)).sigma1;
    const double richardson = (4.0 * s257 - s129) / 3.0;
    EXPECT(std::abs(richardson - exact) <= 1e-4,
           fmt("lambda1 Richardson %.8f vs oracle %.8f", richardson, exact));
}

void criterion_bracket(std::vector<std::string>& notes) {
    ModelParams params;
    auto gen = oracle::rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const ControlField h(oracle::random_field(kCanonical, 0.0, params.H, gen),
                             params.H);
        const StateSolution sol = solve_state(h, kCanonical, params);
        EXPECT(!sol.extinct, "state unexpectedly extinct");
        double lo = 1e300, hi = -1e300;
        for (double v : sol.u.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        EXPECT(lo >= 7.0 - 1e-6, fmt("state min %.9f below 7 - 1e-6", lo));
        EXPECT(hi <= 20.0, fmt("state max %.9f above 20", hi));
    }
}

void criterion_uniqueness_lambda(std::vector<std::string>& notes) {
    ModelParams params;
    auto gen = oracle::rng(4);
    const ControlField h(oracle::random_field(kCanonical, 0.0, params.H, gen),
                         params.H);
    const StateSolution above = solve_state(h, kCanonical, params, true);
    const StateSolution below = solve_state(h, kCanonical, params, false);
    const double gap = norm_inf_diff(above.u, below.u);
    EXPECT(gap <= 1e-8, fmt("maximal/minimal gap %.3e above 1e-8", gap));

    // Newton from random fields inside the bracket, full-effort control.
    const ControlField hH = ControlField::constant(kCanonical, params.H, params.H);
    const StateSolution reference = solve_state(hH, kCanonical, params, true);
    std::uniform_real_distribution<double> level(7.5, 19.0);
    for (int trial = 0; trial < 5; ++trial) {
        ScalarField u0(kCanonical, level(gen));
        for (int i = 0; i < kCanonical.nx; ++i)
            u0.values[i] += 0.4 * std::sin(2.0 * 3.14159265358979 * kCanonical.x(i));
        const StateSolution refined = newton_refine(u0, hH, kCanonical, params);
        const double d = norm_inf_diff(refined.u, reference.u);
        EXPECT(d <= 1e-8, fmt("newton start %d landed %.3e away",
                              static_cast<double>(trial), d));
    }
}

void criterion_lemma_positivity(std::vector<std::string>& notes) {
    ModelParams params;
    auto gen = oracle::rng(5);
    const ControlField h(oracle::random_field(kCanonical, 0.0, params.H, gen),
                         params.H);
    const ControlField g(oracle::random_field(kCanonical, 0.0, params.H, gen),
                         params.H);
    const StateSolution uh = solve_state(h, kCanonical, params);
    const StateSolution ug = solve_state(g, kCanonical, params);

    const auto [V1, V2] = comparison_potentials(uh.u, ug.u, h.field, params);
    const double s1 = principal_eigenvalue(kCanonical, params.q, V1).sigma1;
    EXPECT(std::abs(s1) <= 1e-4 * params.lambda,
           fmt("sigma1(V1) = %.6e not within 1e-4*lambda", s1));

    const double alpha0 = params.K * (1.0 - params.H) / 2.0 *
                          potential_gap_bound(params.K, params);
    const double s2 = principal_eigenvalue(kCanonical, params.q, V2).sigma1;
    EXPECT(alpha0 > 0.0, fmt("alpha0 = %.6f not positive", alpha0));
    EXPECT(s2 >= params.lambda * alpha0 / 2.0,
           fmt("sigma1(V2) = %.6f below lambda*alpha0/2 = %.6f", s2,
               params.lambda * alpha0 / 2.0));
}

void criterion_sensitivity_duality(std::vector<std::string>& notes) {
    ModelParams params;
    auto gen = oracle::rng(6);

    const ControlField hmid =
        ControlField::constant(kCanonical, params.H / 2.0, params.H);
    const StateSolution base = solve_state(hmid, kCanonical, params);
    const ScalarField gamma = oracle::random_field(kCanonical, -1.0, 1.0, gen);
    const ScalarField psi = solve_sensitivity(base.u, hmid, gamma, params);
    std::vector<double> eps{1e-2, 1e-3, 1e-4}, errs;
    for (double e : eps) {
        ScalarField hf = hmid.field;
        for (int k = 0; k < hf.size(); ++k) hf.values[k] += e * gamma[k];
        const StateSolution pert =
            solve_state(ControlField(hf, params.H), kCanonical, params);
        ScalarField diff(kCanonical);
        for (int k = 0; k < diff.size(); ++k)
            diff.values[k] = (pert.u[k] - base.u[k]) / e - psi[k];
        errs.push_back(norm_l2(diff));
    }
    const double slope = oracle::loglog_slope(eps, errs);
    EXPECT(std::abs(slope - 1.0) <= 0.3,
           fmt("difference-quotient slope %.3f outside 1 +/- 0.3", slope));

    const ControlField h(oracle::random_field(kCanonical, 0.0, params.H, gen),
                         params.H);
    const StateSolution uh = solve_state(h, kCanonical, params);
    const AdjointSolution adj = solve_adjoint(uh.u, h, params);
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField g = oracle::random_field(kCanonical, -1.0, 1.0, gen);
        const ScalarField psig = solve_sensitivity(uh.u, h, g, params);
        const double lhs = inner(psig, h.field);
        ScalarField gup(kCanonical);
        for (int k = 0; k < gup.size(); ++k)
            gup.values[k] = g[k] * uh.u[k] * adj.p[k];
        const double rhs = -params.lambda * integrate(gup);
        EXPECT(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)),
               fmt("duality defect %.3e relative", std::abs(lhs - rhs)));
    }
}

void criterion_optimality(std::vector<std::string>& notes) {
    ModelParams params;
    auto gen = oracle::rng(7);

    const ControlField hmid =
        ControlField::constant(kCanonical, params.H / 2.0, params.H);
    const ScalarField gamma = oracle::random_field(kCanonical, -1.0, 1.0, gen);
    const GradientCheckReport grad = gradient_check(hmid, gamma, kCanonical, params);
    EXPECT(std::abs(grad.slope - 1.0) <= 0.3,
           fmt("gradient-check slope %.3f outside 1.0 +/- 0.3", grad.slope));

    const SweepResult swept = forward_backward_sweep(
        ControlField::constant(kCanonical, params.H, params.H), kCanonical, params);
    EXPECT(swept.converged, "sweep did not converge");
    EXPECT(swept.fixed_point_residual <= 1e-8,
           fmt("fixed-point residual %.3e above 1e-8", swept.fixed_point_residual));
    const double stat =
        stationarity_residual(swept.h_opt, swept.u_opt, swept.p_opt, params);
    EXPECT(stat <= 1e-6, fmt("interior stationarity residual %.3e above 1e-6", stat));

    // The canonical optimum pins at the cap, which leaves the interior check
    // vacuous; a large quadratic cost moves it strictly inside the box, so
    // stationarity is exercised for real there.
    ModelParams costly = params;
    costly.B2 = 50.0;
    const SweepResult inner = forward_backward_sweep(
        ControlField::constant(kCanonical, costly.H, costly.H), kCanonical, costly);
    EXPECT(inner.converged, "B2 = 50 sweep did not converge");
    int interior_nodes = 0;
    for (double v : inner.h_opt.field.values)
        if (v > 1e-6 && v < costly.H - 1e-6) ++interior_nodes;
    EXPECT(interior_nodes > 0, "B2 = 50 optimum unexpectedly pinned at the box");
    const double stat_inner =
        stationarity_residual(inner.h_opt, inner.u_opt, inner.p_opt, costly);
    EXPECT(stat_inner <= 1e-6,
           fmt("interior stationarity at B2 = 50 is %.3e, above 1e-6", stat_inner));

    const OracleResult oracle_res = brute_force_oracle(
        3, {0.0, 0.15, 0.3}, kCanonical, params);
    EXPECT(oracle_res.J_all.size() == 27,
           fmt("expected 27 candidates, got %.0f",
               static_cast<double>(oracle_res.J_all.size())));
    EXPECT(swept.J >= oracle_res.J_best - 1e-6 * (1.0 + std::abs(swept.J)),
           fmt("sweep J %.9f does not dominate oracle J %.9f", swept.J,
               oracle_res.J_best));
}

void criterion_uniqueness_b2(std::vector<std::string>& notes) {
    ModelParams params;
    params.B2 = 50.0;
    auto gen = oracle::rng(8);

    const SweepResult a = forward_backward_sweep(
        ControlField::constant(kCanonical, 0.0, params.H), kCanonical, params);
    const SweepResult b = forward_backward_sweep(
        ControlField::constant(kCanonical, params.H, params.H), kCanonical, params);
    const SweepResult c = forward_backward_sweep(
        ControlField(oracle::random_field(kCanonical, 0.0, params.H, gen), params.H),
        kCanonical, params);
    EXPECT(a.converged && b.converged && c.converged, "a sweep did not converge");
    const double dab = norm_inf_diff(a.h_opt.field, b.h_opt.field);
    const double dac = norm_inf_diff(a.h_opt.field, c.h_opt.field);
    EXPECT(dab <= 1e-6, fmt("starts 0 and H disagree by %.3e", dab));
    EXPECT(dac <= 1e-6, fmt("starts 0 and random disagree by %.3e", dac));

    double lo = 1e300, hi = 0.0;
    for (double b2 : {10.0, 20.0, 40.0, 80.0}) {
        ModelParams p2 = params;
        p2.B2 = b2;
        const SweepResult res = forward_backward_sweep(
            ControlField::constant(kCanonical, p2.H, p2.H), kCanonical, p2);
        EXPECT(res.converged, fmt("B2 = %.0f sweep did not converge", b2));
        const double scaled = norm_inf(res.p_opt) * b2;
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
    }
    EXPECT(hi < 2.0 * lo,
           fmt("B2*sup|p| spans [%.6f, %.6f], ratio >= 2", lo, hi));
}

void criterion_degenerate(std::vector<std::string>& notes) {
    ModelParams params;
    params.lambda = 0.1;
    const StateSolution sol = solve_autonomous(params.H, kCanonical, params);
    EXPECT(sol.extinct, "lambda = 0.1 did not report extinction");

    bool rejected = false;
    try {
        parse_config("c = 1.5\nH = 0.3", RunMode::wellposed);
    } catch (const ConstraintViolation&) {
        rejected = true;
    }
    EXPECT(rejected, "c >= 2(1-H) not rejected in wellposed mode");

    ModelParams pinned;
    pinned.B1 = 25.0;  // >= K
    const SweepResult res = forward_backward_sweep(
        ControlField::constant(kCanonical, pinned.H, pinned.H), kCanonical, pinned);
    EXPECT(res.converged, "pinned sweep did not converge");
    EXPECT(norm_inf(res.h_opt.field) == 0.0,
           fmt("pinned control has sup %.3e, expected exactly 0",
               norm_inf(res.h_opt.field)));
    EXPECT(res.J == 0.0, fmt("pinned payoff %.3e, expected 0", res.J));
}

}  // namespace

int main() {
    Harness h;
    h.run(1, "operator verification by manufactured solutions", criterion_operator);
    h.run(2, "principal eigenvalue properties and oracle", criterion_eigen);
    h.run(3, "state bracket for random admissible controls", criterion_bracket);
    h.run(4, "uniqueness at large lambda (two routes + newton)",
          criterion_uniqueness_lambda);
    h.run(5, "comparison-potential positivity", criterion_lemma_positivity);
    h.run(6, "sensitivity limit and discrete duality", criterion_sensitivity_duality);
    h.run(7, "optimality: gradient, stationarity, oracle dominance",
          criterion_optimality);
    h.run(8, "uniqueness at large B2 and adjoint scaling", criterion_uniqueness_b2);
    h.run(9, "degenerate regimes", criterion_degenerate);
    if (h.failures == 0) std::printf("all acceptance criteria passed\n");
    return h.failures;
}
