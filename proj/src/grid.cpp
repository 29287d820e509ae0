#include "harvest/grid.hpp"

#include <algorithm>
#include <cmath>

namespace harvest {

GridSpec GridSpec::interval(double a, double b, int n) {
    GridSpec g;
    g.dim = 1;
    g.x_extent = {a, b};
    g.nx = n;
    g.ny = 1;
    g.validate();
    return g;
}

GridSpec GridSpec::rectangle(double ax, double bx, int nx_,
                             double ay, double by, int ny_) {
    GridSpec g;
    g.dim = 2;
    g.x_extent = {ax, bx};
    g.y_extent = {ay, by};
    g.nx = nx_;
    g.ny = ny_;
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (dim != 1 && dim != 2)
        throw GridTooCoarse("grid dim must be 1 or 2");
    if (!(x_extent[0] < x_extent[1]))
        throw GridTooCoarse("x extent must satisfy a < b");
    if (nx < 3)
        throw GridTooCoarse("x axis needs at least 3 nodes");
    if (dim == 2) {
        if (!(y_extent[0] < y_extent[1]))
            throw GridTooCoarse("y extent must satisfy a < b");
        if (ny < 3)
            throw GridTooCoarse("y axis needs at least 3 nodes");
    }
}

bool ScalarField::all_finite() const {
    return std::all_of(values.begin(), values.end(),
                       [](double v) { return std::isfinite(v); });
}

ScalarField constant_field(const GridSpec& g, double value) {
    return ScalarField(g, value);
}

namespace {

std::vector<double> axis_weights(double h, int n) {
    std::vector<double> w(static_cast<size_t>(n), h);
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

}  // namespace

std::vector<double> quadrature_weights(const GridSpec& g) {
    std::vector<double> wx = axis_weights(g.hx(), g.nx);
    if (g.dim == 1) return wx;
    std::vector<double> wy = axis_weights(g.hy(), g.ny);
    std::vector<double> w(static_cast<size_t>(g.node_count()));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            w[g.index(i, j)] = wx[i] * wy[j];
    return w;
}

std::vector<double> boundary_trace_weights(const GridSpec& g) {
    std::vector<double> t(static_cast<size_t>(g.node_count()), 0.0);
    if (g.dim == 1) {
        t.front() = 1.0;
        t.back() = 1.0;
        return t;
    }
    std::vector<double> wx = axis_weights(g.hx(), g.nx);
    std::vector<double> wy = axis_weights(g.hy(), g.ny);
    for (int j = 0; j < g.ny; ++j) {
        t[g.index(0, j)] += wy[j];
        t[g.index(g.nx - 1, j)] += wy[j];
    }
    for (int i = 0; i < g.nx; ++i) {
        t[g.index(i, 0)] += wx[i];
        t[g.index(i, g.ny - 1)] += wx[i];
    }
    return t;
}

double integrate(const ScalarField& f) {
    std::vector<double> w = quadrature_weights(f.grid);
    double s = 0.0;
    for (size_t k = 0; k < w.size(); ++k) s += w[k] * f[k];
    return s;
}

double inner(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f, g);
    std::vector<double> w = quadrature_weights(f.grid);
    double s = 0.0;
    for (size_t k = 0; k < w.size(); ++k) s += w[k] * f[k] * g[k];
    return s;
}

double norm_l2(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double norm_inf(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double norm_inf_diff(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f, g);
    double m = 0.0;
    for (size_t k = 0; k < f.values.size(); ++k)
        m = std::max(m, std::abs(f[k] - g[k]));
    return m;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (!(a.grid == b.grid))
        throw Error("fields live on different grids");
}

}  // namespace harvest
