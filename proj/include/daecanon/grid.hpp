#pragma once

#include <functional>
#include <vector>

#include "daecanon/linalg.hpp"

namespace dae {

/// Matrix-valued function sampled on a uniform time grid. The carrier for
/// every time-varying quantity: coefficient samples, bases, projectors,
/// reduced pairs. `continuity_aligned` records that consecutive values were
/// produced continuity-first (alignment or pointwise formulas), which the
/// finite-difference derivative requires.
struct GridFunction {
    double t0 = 0.0;
    double t1 = 1.0;
    std::vector<Matrix> values;
    bool continuity_aligned = false;

    GridFunction() = default;
    GridFunction(double a, double b, std::vector<Matrix> vals, bool aligned = false)
        : t0(a), t1(b), values(std::move(vals)), continuity_aligned(aligned) {}

    int points() const { return static_cast<int>(values.size()); }
    double step() const { return (t1 - t0) / (points() - 1); }
    double time_at(int k) const { return t0 + k * step(); }
    int rows() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }
    int cols() const { return values.empty() ? 0 : static_cast<int>(values.front().cols()); }
    const Matrix& at(int k) const { return values[static_cast<std::size_t>(k)]; }
    Matrix& at(int k) { return values[static_cast<std::size_t>(k)]; }

    /// Index of the grid node nearest to t (t must lie within [t0, t1] up to
    /// roundoff slack).
    int node_index(double t) const;

    /// True when t coincides with a grid node to relative precision.
    bool is_node(double t) const;

    /// Cubic Lagrange interpolation from the four bracketing nodes (clamped
    /// near the ends). Exact at the nodes.
    Matrix eval(double t) const;

    /// Largest consecutive-node increment, an empirical Lipschitz bound
    /// ||M_{k+1} - M_k|| <= L h (reported, not asserted).
    double max_step_increment() const;
};

GridFunction grid_constant(double t0, double t1, int n, const Matrix& value);

GridFunction grid_from_fn(double t0, double t1, int n,
                          const std::function<Matrix(double)>& fn);

/// Entrywise 4th-order derivative: central five-point stencil in the
/// interior, one-sided 4th-order stencils at the two nodes on each end.
/// Requires n >= 5 and a continuity-aligned input.
GridFunction grid_derivative(const GridFunction& f);

GridFunction pointwise(const GridFunction& a,
                       const std::function<Matrix(const Matrix&)>& fn);
GridFunction pointwise(const GridFunction& a, const GridFunction& b,
                       const std::function<Matrix(const Matrix&, const Matrix&)>& fn);

GridFunction grid_product(const GridFunction& a, const GridFunction& b);
GridFunction grid_sum(const GridFunction& a, const GridFunction& b);
GridFunction grid_scale(const GridFunction& a, double s);
GridFunction grid_transpose(const GridFunction& a);

/// Check two grid functions share grid and shape, max over nodes of
/// Frobenius distance.
double grid_distance(const GridFunction& a, const GridFunction& b);

}  // namespace dae
