#include "harvest/operators.hpp"

#include <cmath>

namespace harvest {

namespace {

// 1D trapezoid-scaled Robin-Laplacian pieces on an axis with spacing h:
// interior rows (2/h, -1/h), boundary rows (1/h + q, -1/h). Symmetric;
// adding the weighted potential keeps it so.
void axis_matrix(double h, int n, double q,
                 std::vector<double>& diag, std::vector<double>& off) {
    diag.assign(static_cast<size_t>(n), 2.0 / h);
    diag.front() = 1.0 / h + q;
    diag.back() = 1.0 / h + q;
    off.assign(static_cast<size_t>(n - 1), -1.0 / h);
}

}  // namespace

DiscreteOperator::DiscreteOperator(const GridSpec& grid, double q, ScalarField potential)
    : grid_(grid), q_(q), potential_(std::move(potential)) {
    grid_.validate();
    if (!(q_ > 0.0))
        throw ConstraintViolation("q", "Robin coefficient must be > 0");
    if (!(potential_.grid == grid_) || potential_.size() != grid_.node_count())
        throw Error("operator potential does not match the grid");
    if (!potential_.all_finite())
        throw Error("operator potential contains non-finite values");

    weights_ = quadrature_weights(grid_);
    trace_weights_ = boundary_trace_weights(grid_);

    if (grid_.dim == 1) {
        axis_matrix(grid_.hx(), grid_.nx, q_, diag_, super_);
        for (int i = 0; i < grid_.nx; ++i) diag_[i] += weights_[i] * potential_[i];
        sub_ = super_;
    } else {
        wx_ = std::vector<double>(static_cast<size_t>(grid_.nx), grid_.hx());
        wx_.front() = wx_.back() = 0.5 * grid_.hx();
        wy_ = std::vector<double>(static_cast<size_t>(grid_.ny), grid_.hy());
        wy_.front() = wy_.back() = 0.5 * grid_.hy();
        axis_matrix(grid_.hx(), grid_.nx, q_, mx_diag_, mx_off_);
        axis_matrix(grid_.hy(), grid_.ny, q_, my_diag_, my_off_);
    }
}

std::vector<double> DiscreteOperator::apply_weighted_raw(const std::vector<double>& x) const {
    const int n = grid_.node_count();
    std::vector<double> y(static_cast<size_t>(n), 0.0);
    if (grid_.dim == 1) {
        for (int i = 0; i < n; ++i) {
            double v = diag_[i] * x[i];
            if (i > 0) v += sub_[i - 1] * x[i - 1];
            if (i < n - 1) v += super_[i] * x[i + 1];
            y[i] = v;
        }
        return y;
    }
    // M = Mx ⊗ Wy + Wx ⊗ My + W·diag(V)
    const int nx = grid_.nx, ny = grid_.ny;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int k = grid_.index(i, j);
            double v = wy_[j] * mx_diag_[i] * x[k];
            if (i > 0) v += wy_[j] * mx_off_[i - 1] * x[grid_.index(i - 1, j)];
            if (i < nx - 1) v += wy_[j] * mx_off_[i] * x[grid_.index(i + 1, j)];
            v += wx_[i] * my_diag_[j] * x[k];
            if (j > 0) v += wx_[i] * my_off_[j - 1] * x[grid_.index(i, j - 1)];
            if (j < ny - 1) v += wx_[i] * my_off_[j] * x[grid_.index(i, j + 1)];
            v += weights_[k] * potential_[k] * x[k];
            y[k] = v;
        }
    }
    return y;
}

ScalarField DiscreteOperator::apply_weighted(const ScalarField& x) const {
    require_same_grid(x, potential_);
    ScalarField y(grid_);
    y.values = apply_weighted_raw(x.values);
    return y;
}

ScalarField DiscreteOperator::apply(const ScalarField& x) const {
    ScalarField y = apply_weighted(x);
    for (size_t k = 0; k < y.values.size(); ++k) y.values[k] /= weights_[k];
    return y;
}

double DiscreteOperator::quadratic_form(const ScalarField& x) const {
    const std::vector<double> mx = apply_weighted_raw(x.values);
    double s = 0.0;
    for (size_t k = 0; k < mx.size(); ++k) s += x.values[k] * mx[k];
    return s;
}

std::vector<double> tridiagonal_solve(std::vector<double> sub,
                                      std::vector<double> diag,
                                      std::vector<double> super,
                                      std::vector<double> rhs) {
    const int n = static_cast<int>(diag.size());
    if (n == 0) return rhs;
    // Gaussian elimination with partial pivoting; sub[] doubles as storage
    // for the second superdiagonal created by row swaps (dgtsv layout).
    for (int i = 0; i < n - 1; ++i) {
        const bool last = (i == n - 2);
        if (std::abs(diag[i]) >= std::abs(sub[i])) {
            if (diag[i] == 0.0)
                throw JacobianSingular("tridiagonal solve: zero pivot");
            const double fact = sub[i] / diag[i];
            diag[i + 1] -= fact * super[i];
            rhs[i + 1] -= fact * rhs[i];
            sub[i] = 0.0;
        } else {
            const double fact = diag[i] / sub[i];
            diag[i] = sub[i];
            const double tmp_d = diag[i + 1];
            diag[i + 1] = super[i] - fact * tmp_d;
            if (!last) {
                sub[i] = super[i + 1];
                super[i + 1] = -fact * sub[i];
            } else {
                sub[i] = 0.0;
            }
            super[i] = tmp_d;
            const double tmp_b = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = tmp_b - fact * rhs[i + 1];
        }
    }
    if (diag[n - 1] == 0.0)
        throw JacobianSingular("tridiagonal solve: zero pivot");

    rhs[n - 1] /= diag[n - 1];
    if (n > 1)
        rhs[n - 2] = (rhs[n - 2] - super[n - 2] * rhs[n - 1]) / diag[n - 2];
    for (int i = n - 3; i >= 0; --i)
        rhs[i] = (rhs[i] - super[i] * rhs[i + 1] - sub[i] * rhs[i + 2]) / diag[i];
    return rhs;
}

std::vector<double> DiscreteOperator::solve_cg(const std::vector<double>& b,
                                               double shift) const {
    const int n = grid_.node_count();
    const int nx = grid_.nx;
    std::vector<double> precond(static_cast<size_t>(n));
    for (int j = 0; j < grid_.ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int k = grid_.index(i, j);
            precond[k] = wy_[j] * mx_diag_[i] + wx_[i] * my_diag_[j] +
                         weights_[k] * (potential_[k] + shift);
        }

    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    std::vector<double> x(static_cast<size_t>(n), 0.0);
    if (bnorm == 0.0) return x;

    const double rtol = 1e-12;
    std::vector<double> r = b;
    std::vector<double> z(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) z[k] = r[k] / precond[k];
    std::vector<double> p = z;
    double rz = 0.0;
    for (int k = 0; k < n; ++k) rz += r[k] * z[k];

    const int max_iters = 20 * n;
    for (int it = 0; it < max_iters; ++it) {
        std::vector<double> ap = apply_weighted_raw(p);
        if (shift != 0.0)
            for (int k = 0; k < n; ++k) ap[k] += shift * weights_[k] * p[k];
        double pap = 0.0;
        for (int k = 0; k < n; ++k) pap += p[k] * ap[k];
        if (pap <= 0.0)
            throw NotPositiveDefinite(
                "conjugate gradients found non-positive curvature; "
                "sigma1(V) <= 0 at the discrete level");
        const double alpha = rz / pap;
        double rnorm = 0.0;
        for (int k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
            rnorm += r[k] * r[k];
        }
        if (std::sqrt(rnorm) <= rtol * bnorm) return x;
        double rz_next = 0.0;
        for (int k = 0; k < n; ++k) {
            z[k] = r[k] / precond[k];
            rz_next += r[k] * z[k];
        }
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    throw MaxIterations("conjugate gradients did not reach tolerance");
}

ScalarField DiscreteOperator::solve_weighted(const std::vector<double>& b,
                                             double shift) const {
    ScalarField x(grid_);
    if (grid_.dim == 1) {
        std::vector<double> d = diag_;
        if (shift != 0.0)
            for (size_t k = 0; k < d.size(); ++k) d[k] += shift * weights_[k];
        x.values = tridiagonal_solve(sub_, d, super_, b);
    } else {
        x.values = solve_cg(b, shift);
    }
    return x;
}

ScalarField DiscreteOperator::solve(const ScalarField& rhs,
                                    const ScalarField* boundary_data,
                                    double shift) const {
    require_same_grid(rhs, potential_);
    std::vector<double> b(static_cast<size_t>(grid_.node_count()));
    for (size_t k = 0; k < b.size(); ++k) b[k] = weights_[k] * rhs[k];
    if (boundary_data) {
        require_same_grid(*boundary_data, potential_);
        for (size_t k = 0; k < b.size(); ++k)
            b[k] += trace_weights_[k] * (*boundary_data)[k];
    }
    return solve_weighted(b, shift);
}

DiscreteOperator assemble(const GridSpec& grid, double q, const ScalarField& potential) {
    return DiscreteOperator(grid, q, potential);
}

ScalarField solve_linear(const DiscreteOperator& op, const ScalarField& rhs,
                         const ScalarField* boundary_data) {
    return op.solve(rhs, boundary_data);
}

}  // namespace harvest
