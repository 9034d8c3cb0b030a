#include "daecanon/grid.hpp"

#include <cmath>

#include "doctest.h"

using namespace dae;

TEST_CASE("grid_derivative of constants and low-degree polynomials") {
    Matrix m(2, 2);
    m << 1, 2, 3, 4;
    GridFunction c = grid_constant(0.0, 1.0, 9, m);
    CHECK(grid_distance(grid_derivative(c), grid_constant(0.0, 1.0, 9, Matrix::Zero(2, 2))) <
          1e-13);

    // d/dt (t M) = M exactly for the 4th-order stencils.
    GridFunction lin = grid_from_fn(0.0, 1.0, 9, [&](double t) -> Matrix { return t * m; });
    CHECK(grid_distance(grid_derivative(lin), c) < 1e-12);

    GridFunction quart = grid_from_fn(0.0, 1.0, 17, [](double t) -> Matrix {
        Matrix v(1, 1);
        v << t * t * t * t;
        return v;
    });
    GridFunction quart_d = grid_from_fn(0.0, 1.0, 17, [](double t) -> Matrix {
        Matrix v(1, 1);
        v << 4 * t * t * t;
        return v;
    });
    CHECK(grid_distance(grid_derivative(quart), quart_d) < 1e-11);
}

TEST_CASE("grid_derivative is 4th order on trigonometric data") {
    auto err_at = [](int n) {
        GridFunction f = grid_from_fn(0.0, 2.0, n, [](double t) -> Matrix {
            Matrix v(2, 1);
            v << std::sin(3 * t), std::cos(2 * t);
            return v;
        });
        GridFunction d = grid_from_fn(0.0, 2.0, n, [](double t) -> Matrix {
            Matrix v(2, 1);
            v << 3 * std::cos(3 * t), -2 * std::sin(2 * t);
            return v;
        });
        return grid_distance(grid_derivative(f), d);
    };
    double e1 = err_at(65), e2 = err_at(129);
    CHECK(e1 / e2 >= 12.0);  // 4th order gives 16x per halving
}

TEST_CASE("grid interpolation is exact at nodes and 4th order at midpoints") {
    GridFunction f = grid_from_fn(0.0, 1.0, 33, [](double t) -> Matrix {
        Matrix v(1, 1);
        v << std::exp(t);
        return v;
    });
    CHECK(std::abs(f.eval(f.time_at(7))(0, 0) - std::exp(f.time_at(7))) < 1e-14);
    double h = f.step();
    double worst = 0;
    for (int k = 0; k + 1 < f.points(); ++k) {
        double t = f.time_at(k) + h / 2;
        worst = std::max(worst, std::abs(f.eval(t)(0, 0) - std::exp(t)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("grid_derivative requires aligned input and 5 nodes") {
    Matrix m = Matrix::Zero(1, 1);
    GridFunction g(0.0, 1.0, std::vector<Matrix>(4, m), true);
    CHECK_THROWS_AS(grid_derivative(g), Error);
    GridFunction raw(0.0, 1.0, std::vector<Matrix>(6, m), false);
    CHECK_THROWS_AS(grid_derivative(raw), Error);
}
