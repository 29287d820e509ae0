#pragma once

#include <vector>

#include "harvest/grid.hpp"

namespace harvest {

/// Discrete -Δ + V with Robin boundary ∂u/∂η + q u = 0, assembled by
/// second-order central differences with ghost-node elimination at the
/// boundary.
///
/// Two views of the same operator:
///   apply(x)           pointwise rows, i.e. the finite-difference value of
///                      -Δx + Vx at every node (boundary rows carry the
///                      eliminated Robin term; applying to a constant leaves
///                      2q/h at boundary rows and zero inside);
///   apply_weighted(x)  the trapezoid-scaled form M x = W·apply(x), which is
///                      a symmetric matrix. All inner products, Rayleigh
///                      quotients and linear solves run through M.
///
/// 1D stores the tridiagonal of M; 2D applies the 5-point stencil
/// matrix-free.
class DiscreteOperator {
public:
    DiscreteOperator(const GridSpec& grid, double q, ScalarField potential);

    const GridSpec& grid() const { return grid_; }
    double robin_q() const { return q_; }
    const ScalarField& potential() const { return potential_; }
    const std::vector<double>& weights() const { return weights_; }

    ScalarField apply(const ScalarField& x) const;
    ScalarField apply_weighted(const ScalarField& x) const;

    /// x^T M x; equals ∫|∇x|² + ∫V x² + ∫_∂Ω q x² in the discrete
    /// quadrature, exactly.
    double quadratic_form(const ScalarField& x) const;

    /// Solves (A + shift) x = rhs with optional inhomogeneous Robin data g
    /// (∂x/∂η + q x = g on the boundary), i.e. (M + shift·W) x = W·rhs + T·g
    /// with T the boundary-trace weights. 1D: banded LU with partial
    /// pivoting. 2D: Jacobi-preconditioned conjugate gradients, relative
    /// tolerance 1e-12; throws NotPositiveDefinite on negative curvature and
    /// MaxIterations past 20·n iterations.
    ScalarField solve(const ScalarField& rhs,
                      const ScalarField* boundary_data = nullptr,
                      double shift = 0.0) const;

    /// Same solve with a caller-built weighted right-hand side b:
    /// (M + shift·W) x = b.
    ScalarField solve_weighted(const std::vector<double>& b, double shift = 0.0) const;

private:
    GridSpec grid_;
    double q_ = 1.0;
    ScalarField potential_;
    std::vector<double> weights_;
    std::vector<double> trace_weights_;
    // 1D tridiagonal of M (scaled, symmetric), potential included.
    std::vector<double> sub_, diag_, super_;
    // 2D: per-axis pieces of M = Mx⊗Wy + Wx⊗My + W·diag(V).
    std::vector<double> wx_, wy_;
    std::vector<double> mx_diag_, mx_off_, my_diag_, my_off_;

    std::vector<double> apply_weighted_raw(const std::vector<double>& x) const;
    std::vector<double> solve_cg(const std::vector<double>& b, double shift) const;
};

/// Assembles the operator; throws GridTooCoarse if any active axis has
/// fewer than 3 nodes.
DiscreteOperator assemble(const GridSpec& grid, double q, const ScalarField& potential);

/// Convenience wrapper around DiscreteOperator::solve with zero shift.
ScalarField solve_linear(const DiscreteOperator& op, const ScalarField& rhs,
                         const ScalarField* boundary_data = nullptr);

/// Tridiagonal LU with partial pivoting (LAPACK dgtsv algorithm);
/// deterministic, no tolerance. Throws JacobianSingular on a zero pivot.
std::vector<double> tridiagonal_solve(std::vector<double> sub,
                                      std::vector<double> diag,
                                      std::vector<double> super,
                                      std::vector<double> rhs);

}  // namespace harvest
