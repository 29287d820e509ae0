#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "harvest/errors.hpp"

namespace harvest {

/// Structured grid over an interval (dim = 1) or an axis-aligned rectangle
/// (dim = 2). Nodes include both endpoints on every axis; spacing is uniform
/// per axis.
struct GridSpec {
    int dim = 1;
    std::array<double, 2> x_extent{0.0, 1.0};
    std::array<double, 2> y_extent{0.0, 1.0};
    int nx = 3;
    int ny = 1;

    static GridSpec interval(double a, double b, int n);
    static GridSpec rectangle(double ax, double bx, int nx_,
                              double ay, double by, int ny_);

    double hx() const { return (x_extent[1] - x_extent[0]) / (nx - 1); }
    double hy() const { return (y_extent[1] - y_extent[0]) / (ny - 1); }

    int node_count() const { return dim == 1 ? nx : nx * ny; }

    // Lexicographic node numbering, x fastest.
    int index(int i, int j = 0) const { return j * nx + i; }
    double x(int i) const { return x_extent[0] + i * hx(); }
    double y(int j) const { return y_extent[0] + j * hy(); }

    bool on_boundary(int i, int j = 0) const {
        if (i == 0 || i == nx - 1) return true;
        return dim == 2 && (j == 0 || j == ny - 1);
    }

    /// Throws GridTooCoarse unless every active axis has >= 3 nodes and the
    /// extents are proper intervals.
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

/// Nodal values of a function on a grid. One representation serves every
/// role in the pipeline: state u, adjoint p, sensitivity, potential,
/// direction, control.
struct ScalarField {
    GridSpec grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.node_count()), fill) {}

    double& operator[](size_t k) { return values[k]; }
    double operator[](size_t k) const { return values[k]; }
    int size() const { return static_cast<int>(values.size()); }

    bool all_finite() const;
};

ScalarField constant_field(const GridSpec& g, double value);

/// Trapezoid quadrature weights per node (tensor product in 2D); half weight
/// on boundary nodes. These define the discrete volume integral and the
/// discrete L2 inner product used throughout.
std::vector<double> quadrature_weights(const GridSpec& g);

/// Boundary-trace quadrature weights: zero at interior nodes; in 1D the two
/// endpoints carry weight 1, in 2D boundary nodes carry trapezoid weights
/// along the boundary edges (corners accumulate both faces).
std::vector<double> boundary_trace_weights(const GridSpec& g);

double integrate(const ScalarField& f);                          // ∫ f
double inner(const ScalarField& f, const ScalarField& g);        // ∫ f g
double norm_l2(const ScalarField& f);                            // sqrt(∫ f²)
double norm_inf(const ScalarField& f);
double norm_inf_diff(const ScalarField& f, const ScalarField& g);

void require_same_grid(const ScalarField& a, const ScalarField& b);

}  // namespace harvest
