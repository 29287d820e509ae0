#include <doctest.h>

#include <cmath>

#include "harvest/eigenpair.hpp"
#include "harvest/operators.hpp"
#include "oracle_helpers.hpp"

using namespace harvest;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dense matrix of the pointwise rows, built column by column from apply().
std::vector<std::vector<double>> dense_rows(const DiscreteOperator& op) {
    const int n = op.grid().node_count();
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    ScalarField e(op.grid());
    for (int j = 0; j < n; ++j) {
        std::fill(e.values.begin(), e.values.end(), 0.0);
        e.values[j] = 1.0;
        const ScalarField col = op.apply(e);
        for (int i = 0; i < n; ++i) A[i][j] = col[i];
    }
    return A;
}

}  // namespace

TEST_CASE("hand-assembled 3-node operator") {
    const GridSpec grid = GridSpec::interval(0.0, 1.0, 3);
    const double q = 1.0, h = 0.5;
    const DiscreteOperator op = assemble(grid, q, ScalarField(grid, 0.0));

    // Ghost elimination by hand: boundary rows 2(1+hq)/h^2, -2/h^2; interior
    // the plain central stencil.
    const double d_b = 2.0 * (1.0 + h * q) / (h * h);
    const double o_b = -2.0 / (h * h);
    const double d_i = 2.0 / (h * h);
    const double o_i = -1.0 / (h * h);
    const std::vector<std::vector<double>> expected = {
        {d_b, o_b, 0.0}, {o_i, d_i, o_i}, {0.0, o_b, d_b}};
    const std::vector<std::vector<double>> got = dense_rows(op);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(got[i][j] == doctest::Approx(expected[i][j]).epsilon(1e-14));

    // Applying to a constant leaves the Robin residual 2q/h at the boundary
    // rows only.
    const ScalarField ones(grid, 1.0);
    const ScalarField r = op.apply(ones);
    CHECK(r[0] == doctest::Approx(2.0 * q / h).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(0.0));
    CHECK(r[2] == doctest::Approx(2.0 * q / h).epsilon(1e-14));
}

TEST_CASE("operator is symmetric in the discrete inner product") {
    auto gen = oracle::rng(21);

    const GridSpec g1 = GridSpec::interval(0.0, 2.0, 17);
    const DiscreteOperator op1 =
        assemble(g1, 1.7, oracle::random_field(g1, -1.0, 3.0, gen));
    const GridSpec g2 = GridSpec::rectangle(0.0, 1.0, 9, 0.0, 1.0, 9);
    const DiscreteOperator op2 =
        assemble(g2, 0.8, oracle::random_field(g2, -1.0, 3.0, gen));

    auto check_symmetric = [&](const DiscreteOperator& op, const GridSpec& g) {
        for (int trial = 0; trial < 5; ++trial) {
            const ScalarField x = oracle::random_field(g, -1.0, 1.0, gen);
            const ScalarField y = oracle::random_field(g, -1.0, 1.0, gen);
            const double axy = inner(op.apply(x), y);
            const double xay = inner(x, op.apply(y));
            CHECK(std::abs(axy - xay) <=
                  1e-12 * std::max({1.0, std::abs(axy), std::abs(xay)}) * 100.0);
        }
    };
    check_symmetric(op1, g1);
    check_symmetric(op2, g2);
}

TEST_CASE("constant potential shifts the diagonal exactly") {
    const GridSpec grid = GridSpec::interval(0.0, 1.0, 9);
    const DiscreteOperator base = assemble(grid, 1.0, ScalarField(grid, 0.0));
    const DiscreteOperator shifted = assemble(grid, 1.0, ScalarField(grid, 2.5));
    auto gen = oracle::rng(3);
    const ScalarField x = oracle::random_field(grid, -1.0, 1.0, gen);
    const ScalarField a = base.apply(x);
    const ScalarField b = shifted.apply(x);
    for (int k = 0; k < x.size(); ++k)
        CHECK(b[k] - a[k] == doctest::Approx(2.5 * x[k]).epsilon(1e-13));
}

TEST_CASE("zero right-hand side gives the zero solution") {
    const GridSpec grid = GridSpec::interval(0.0, 1.0, 33);
    const DiscreteOperator op = assemble(grid, 1.0, ScalarField(grid, 1.0));
    const ScalarField x = op.solve(ScalarField(grid, 0.0));
    CHECK(norm_inf(x) == 0.0);
}

TEST_CASE("quadratic manufactured solution is exact in 1D") {
    for (double q : {1.0, 2.5}) {
        for (int n : {9, 33, 257}) {
            const GridSpec grid = GridSpec::interval(0.0, 1.0, n);
            const DiscreteOperator op = assemble(grid, q, ScalarField(grid, 1.0));
            ScalarField rhs(grid), bdata(grid), exact(grid);
            for (int i = 0; i < n; ++i) {
                const double x = grid.x(i);
                exact.values[i] = x * x;
                rhs.values[i] = -2.0 + x * x;
            }
            bdata.values[0] = 0.0;            // -u'(0) + q u(0)
            bdata.values[n - 1] = 2.0 + q;    // u'(1) + q u(1)
            const ScalarField u = op.solve(rhs, &bdata);
            CHECK(norm_inf_diff(u, exact) <= 1e-10);
        }
    }
}

TEST_CASE("quadratic manufactured solution is exact in 2D") {
    const double q = 1.3;
    const GridSpec grid = GridSpec::rectangle(0.0, 1.0, 17, 0.0, 1.0, 13);
    const DiscreteOperator op = assemble(grid, q, ScalarField(grid, 1.0));
    ScalarField rhs(grid), bdata(grid), exact(grid);
    auto uex = [](double x, double y) { return x * (1.0 - x) + y * (1.0 - y); };
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            const int k = grid.index(i, j);
            exact.values[k] = uex(x, y);
            rhs.values[k] = 4.0 + uex(x, y);
            // Outward normal derivative is -1 on every face of this profile,
            // so one nodal trace value is consistent at the corners.
            if (i == 0 || i == grid.nx - 1)
                bdata.values[k] = -1.0 + q * (y - y * y);
            if (j == 0 || j == grid.ny - 1)
                bdata.values[k] = -1.0 + q * (x - x * x);
            if ((i == 0 || i == grid.nx - 1) && (j == 0 || j == grid.ny - 1))
                bdata.values[k] = -1.0;
        }
    const ScalarField u = op.solve(rhs, &bdata);
    CHECK(norm_inf_diff(u, exact) <= 1e-9);
}

TEST_CASE("manufactured smooth solution converges at order 2 in 1D") {
    const double q = 1.0;
    std::vector<double> hs, errs;
    for (int n : {33, 65, 129, 257}) {
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
        const ScalarField u = op.solve(rhs, &bdata);
        hs.push_back(grid.hx());
        errs.push_back(norm_inf_diff(u, exact));
    }
    const double order = oracle::loglog_slope(hs, errs);
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("manufactured smooth solution converges at order 2 in 2D") {
    const double q = 0.9;
    std::vector<double> hs, errs;
    for (int n : {9, 17, 33}) {
        const GridSpec grid = GridSpec::rectangle(0.0, 1.0, n, 0.0, 1.0, n);
        const DiscreteOperator op = assemble(grid, q, ScalarField(grid, 0.0));
        ScalarField rhs(grid), bdata(grid), exact(grid);
        auto uex = [&](double x, double y) {
            return std::cos(kPi * x) + std::cos(kPi * y) + 3.0;
        };
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = grid.x(i), y = grid.y(j);
                const int k = grid.index(i, j);
                exact.values[k] = uex(x, y);
                rhs.values[k] = kPi * kPi * (std::cos(kPi * x) + std::cos(kPi * y));
                // Normal derivatives vanish on every face for this profile.
                if (grid.on_boundary(i, j)) bdata.values[k] = q * uex(x, y);
            }
        const ScalarField u = op.solve(rhs, &bdata);
        hs.push_back(grid.hx());
        errs.push_back(norm_inf_diff(u, exact));
    }
    const double order = oracle::loglog_slope(hs, errs);
    CHECK(order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("nonnegative potential keeps the operator positive definite") {
    auto gen = oracle::rng(5);
    const GridSpec g1 = GridSpec::interval(0.0, 1.0, 33);
    const DiscreteOperator op1 =
        assemble(g1, 0.5, oracle::random_field(g1, 0.0, 4.0, gen));
    CHECK(oracle::dense_smallest_eigenvalue(op1) > 0.0);
    CHECK(principal_eigenvalue(g1, 0.5, op1.potential()).sigma1 > 0.0);

    const GridSpec g2 = GridSpec::rectangle(0.0, 1.0, 9, 0.0, 1.0, 9);
    const DiscreteOperator op2 =
        assemble(g2, 1.0, oracle::random_field(g2, 0.0, 4.0, gen));
    CHECK(oracle::dense_smallest_eigenvalue(op2) > 0.0);
}

TEST_CASE("indefinite 2D operator is reported by conjugate gradients") {
    const GridSpec grid = GridSpec::rectangle(0.0, 1.0, 9, 0.0, 1.0, 9);
    const DiscreteOperator op = assemble(grid, 1.0, ScalarField(grid, -100.0));
    CHECK_THROWS_AS(op.solve(ScalarField(grid, 1.0)), NotPositiveDefinite);
}

TEST_CASE("coarse grids are rejected") {
    CHECK_THROWS_AS(GridSpec::interval(0.0, 1.0, 2), GridTooCoarse);
    GridSpec raw;
    raw.nx = 2;
    CHECK_THROWS_AS(assemble(raw, 1.0, ScalarField()), GridTooCoarse);
}
