#include "harvest/model.hpp"

#include <cmath>
#include <string>

namespace harvest {

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw ConstraintViolation(name, "must be > 0, got " + std::to_string(v));
    };
    positive(lambda, "lambda");
    positive(K, "K");
    positive(q, "q");
    if (!(H > 0.0 && H < 1.0))
        throw ConstraintViolation("H", "must lie in (0,1), got " + std::to_string(H));
    if (c < 0.0)
        throw ConstraintViolation("c", "must be >= 0, got " + std::to_string(c));
    if (B1 < 0.0)
        throw ConstraintViolation("B1", "must be >= 0, got " + std::to_string(B1));
    if (B2 < 0.0)
        throw ConstraintViolation("B2", "must be >= 0, got " + std::to_string(B2));
}

double reaction(double s, double h_val, const ModelParams& params) {
    return s - s * s / params.K - params.c * s * s / (1.0 + s * s) - h_val * s;
}

double reaction_derivative(double s, double h_val, const ModelParams& params) {
    const double d = 1.0 + s * s;
    return 1.0 - 2.0 * s / params.K - 2.0 * params.c * s / (d * d) - h_val;
}

double potential_gap_bound(double x, const ModelParams& params) {
    const double d = 1.0 + x * x;
    return 1.0 / x + params.c * (1.0 - x * x) / (d * d);
}

namespace {

// Bisection to |f| <= tol on [lo, hi]; assumes f(lo) > 0 > f(hi).
double bisect_root(double lo, double hi, double tol, int max_iters,
                   const auto& f) {
    double flo = f(lo);
    for (int it = 0; it < max_iters; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) <= tol) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double compute_r0(double alpha, const ModelParams& params) {
    const double lo = params.K * (1.0 - alpha) / 2.0;
    const double hi = params.K;
    auto f = [&](double s) { return reaction(s, alpha, params); };
    // Pure logistic degenerate case: the root sits exactly at K.
    if (std::abs(f(hi)) <= 1e-12) return hi;
    if (!(f(lo) > 0.0 && f(hi) < 0.0))
        throw NoSignChange("f_alpha does not change sign on (K(1-alpha)/2, K); "
                           "parameters outside the wellposed regime");
    const double r0 = bisect_root(lo, hi, 1e-12, 200, f);
    // Remark-level bracket, asserted on the way out.
    if (!(r0 > lo && r0 < hi))
        throw Error("compute_r0: root left the bracket");
    return r0;
}

WellposednessReport wellposedness(const ModelParams& params, double lambda1) {
    WellposednessReport rep;
    rep.c_bound_ok = params.growth_admissible();

    // Scan g on a logarithmic grid over (1e-6, 10K]; refine every sign
    // change by bisection; x0 is the last root, 0 if g stays positive.
    auto g = [&](double x) { return potential_gap_bound(x, params); };
    const int n_scan = 4000;
    const double lo = 1e-6, hi = 10.0 * params.K;
    const double ratio = std::pow(hi / lo, 1.0 / (n_scan - 1));
    rep.x0 = 0.0;
    double x_prev = lo, g_prev = g(lo);
    for (int i = 1; i < n_scan; ++i) {
        const double x = lo * std::pow(ratio, i);
        const double gx = g(x);
        if ((g_prev > 0.0) != (gx > 0.0)) {
            double a = x_prev, b = x;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if ((g(m) > 0.0) == (g(a) > 0.0)) a = m; else b = m;
                if (b - a <= 1e-14 * std::max(1.0, b)) break;
            }
            rep.x0 = 0.5 * (a + b);
        }
        x_prev = x;
        g_prev = gx;
    }

    rep.K_bar = std::max(rep.x0, 8.0 / (1.0 - params.H));
    rep.K_ok = params.K > rep.K_bar;
    rep.lambda_threshold = lambda1 / (1.0 - params.H);
    rep.lambda_ok = params.lambda > rep.lambda_threshold;

    if (rep.c_bound_ok && rep.K_ok) {
        for (double alpha : {0.0, params.H / 2.0, params.H})
            rep.r0_values[alpha] = compute_r0(alpha, params);
    }
    return rep;
}

}  // namespace harvest
