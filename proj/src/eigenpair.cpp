#include "harvest/eigenpair.hpp"

#include <algorithm>
#include <cmath>

namespace harvest {

double rayleigh_quotient(const DiscreteOperator& op, const ScalarField& x) {
    const std::vector<double>& w = op.weights();
    double xwx = 0.0;
    for (size_t k = 0; k < w.size(); ++k) xwx += w[k] * x[k] * x[k];
    if (xwx == 0.0) throw Error("Rayleigh quotient of the zero field");
    return op.quadratic_form(x) / xwx;
}

EigenPair principal_eigenvalue(const GridSpec& grid, double q, const ScalarField& V,
                               const EigenOptions& opts) {
    const DiscreteOperator op = assemble(grid, q, V);
    const std::vector<double>& w = op.weights();
    const int n = grid.node_count();

    const double vmin = *std::min_element(V.values.begin(), V.values.end());
    const double shift = std::max(0.0, -vmin) + 1.0;

    // Inverse power iteration on A + shift (positive definite): repeatedly
    // solve (M + shift·W) x = W φ and track the Rayleigh quotient.
    ScalarField phi(grid, 1.0);
    auto normalize_l2 = [&](ScalarField& f) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += w[k] * f[k] * f[k];
        s = std::sqrt(s);
        for (int k = 0; k < n; ++k) f.values[k] /= s;
    };
    normalize_l2(phi);

    // One Rayleigh quotient and one residual per step, both from a single
    // M·φ product. The Rayleigh difference alone under-resolves the
    // eigenvector, so the residual participates in the stopping rule.
    auto step_stats = [&](const ScalarField& f, double& sigma_out, double& resid_out) {
        const ScalarField mf = op.apply_weighted(f);
        double fmf = 0.0, fwf = 0.0;
        for (int k = 0; k < n; ++k) {
            fmf += f[k] * mf[k];
            fwf += w[k] * f[k] * f[k];
        }
        sigma_out = fmf / fwf;
        double r2 = 0.0;
        for (int k = 0; k < n; ++k) {
            const double r = mf[k] / w[k] - sigma_out * f[k];
            r2 += w[k] * r * r;
        }
        resid_out = std::sqrt(r2);
    };

    double sigma = 0.0, resid = 0.0;
    step_stats(phi, sigma, resid);
    int it = 0;
    bool converged = false;
    std::vector<double> b(static_cast<size_t>(n));
    for (it = 1; it <= opts.max_iters; ++it) {
        for (int k = 0; k < n; ++k) b[k] = w[k] * phi[k];
        phi = op.solve_weighted(b, shift);
        normalize_l2(phi);
        const double sigma_prev = sigma;
        step_stats(phi, sigma, resid);
        if (std::abs(sigma - sigma_prev) <= opts.tol &&
            resid <= 2e-10 * std::max(1.0, std::abs(sigma))) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw MaxIterations("inverse power iteration stalled; eigenvalue gap too small");

    // The principal eigenfunction has one sign; fix it positive.
    double mass = 0.0;
    for (int k = 0; k < n; ++k) mass += w[k] * phi[k];
    if (mass < 0.0)
        for (double& v : phi.values) v = -v;
    for (double v : phi.values)
        if (!(v > 0.0))
            throw Error("principal eigenfunction is not positive at every node");

    EigenPair pair;
    pair.sigma1 = sigma;
    pair.phi = phi;
    pair.iterations = it;
    pair.phi_sup = norm_inf(phi);
    pair.residual = resid;
    return pair;
}

ScalarField state_potential(const ScalarField& u, const ScalarField& h,
                            const ModelParams& params) {
    require_same_grid(u, h);
    ScalarField V(u.grid);
    for (size_t k = 0; k < V.values.size(); ++k) {
        const double s = u[k];
        V.values[k] = params.lambda *
                      (-1.0 + h[k] + s / params.K + params.c * s / (1.0 + s * s));
    }
    return V;
}

ScalarField pair_potential(const ScalarField& u_h, const ScalarField& u_g,
                           const ScalarField& h, const ModelParams& params) {
    require_same_grid(u_h, u_g);
    require_same_grid(u_h, h);
    ScalarField V(u_h.grid);
    for (size_t k = 0; k < V.values.size(); ++k) {
        const double a = u_h[k], b = u_g[k];
        V.values[k] = params.lambda *
                      (-1.0 + h[k] + (a + b) / params.K +
                       params.c * (a + b) / ((1.0 + a * a) * (1.0 + b * b)));
    }
    return V;
}

std::pair<ScalarField, ScalarField> comparison_potentials(const ScalarField& u_h,
                                                          const ScalarField& u_g,
                                                          const ScalarField& h,
                                                          const ModelParams& params) {
    return {state_potential(u_h, h, params), pair_potential(u_h, u_g, h, params)};
}

ScalarField adjoint_potential(const ScalarField& u, const ScalarField& h,
                              const ModelParams& params) {
    require_same_grid(u, h);
    ScalarField V(u.grid);
    for (size_t k = 0; k < V.values.size(); ++k)
        V.values[k] = -params.lambda * reaction_derivative(u[k], h[k], params);
    return V;
}

}  // namespace harvest
