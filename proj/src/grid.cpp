#include "daecanon/grid.hpp"

#include <cmath>

namespace dae {

int GridFunction::node_index(double t) const {
    double k = (t - t0) / step();
    int idx = static_cast<int>(std::lround(k));
    return std::clamp(idx, 0, points() - 1);
}

bool GridFunction::is_node(double t) const {
    int k = node_index(t);
    return std::abs(time_at(k) - t) <= 1e-10 * (1.0 + std::abs(t1 - t0));
}

Matrix GridFunction::eval(double t) const {
    const int n = points();
    if (n == 1) return values[0];
    double h = step();
    double s = (t - t0) / h;
    int k = static_cast<int>(std::floor(s));
    k = std::clamp(k, 0, n - 2);
    if (n < 4) {  // linear fallback for tiny grids
        double w = s - k;
        return (1.0 - w) * at(k) + w * at(k + 1);
    }
    int base = std::clamp(k - 1, 0, n - 4);
    double x = s - base;  // in node units relative to the 4-point window
    Matrix out = Matrix::Zero(rows(), cols());
    for (int j = 0; j < 4; ++j) {
        double w = 1.0;
        for (int i = 0; i < 4; ++i)
            if (i != j) w *= (x - i) / (j - i);
        out += w * at(base + j);
    }
    return out;
}

double GridFunction::max_step_increment() const {
    double worst = 0.0;
    for (int k = 0; k + 1 < points(); ++k)
        worst = std::max(worst, (at(k + 1) - at(k)).norm());
    return worst;
}

GridFunction grid_constant(double t0, double t1, int n, const Matrix& value) {
    return GridFunction(t0, t1, std::vector<Matrix>(static_cast<std::size_t>(n), value),
                        true);
}

GridFunction grid_from_fn(double t0, double t1, int n,
                          const std::function<Matrix(double)>& fn) {
    GridFunction g;
    g.t0 = t0;
    g.t1 = t1;
    g.values.reserve(static_cast<std::size_t>(n));
    double h = (t1 - t0) / (n - 1);
    for (int k = 0; k < n; ++k) g.values.push_back(fn(t0 + k * h));
    g.continuity_aligned = true;
    return g;
}

GridFunction grid_derivative(const GridFunction& f) {
    const int n = f.points();
    if (n < 5) throw Error("grid_derivative: need at least 5 nodes");
    if (!f.continuity_aligned)
        throw Error("grid_derivative: input is not continuity-aligned");
    const double h = f.step();
    GridFunction d;
    d.t0 = f.t0;
    d.t1 = f.t1;
    d.continuity_aligned = true;
    d.values.resize(static_cast<std::size_t>(n));
    auto v = [&](int k) -> const Matrix& { return f.at(k); };
    for (int k = 0; k < n; ++k) {
        Matrix m;
        if (k == 0) {
            m = (-25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4)) /
                (12.0 * h);
        } else if (k == 1) {
            m = (-3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4)) /
                (12.0 * h);
        } else if (k == n - 2) {
            m = (3.0 * v(n - 1) + 10.0 * v(n - 2) - 18.0 * v(n - 3) + 6.0 * v(n - 4) -
                 v(n - 5)) /
                (12.0 * h);
        } else if (k == n - 1) {
            m = (25.0 * v(n - 1) - 48.0 * v(n - 2) + 36.0 * v(n - 3) - 16.0 * v(n - 4) +
                 3.0 * v(n - 5)) /
                (12.0 * h);
        } else {
            m = (v(k - 2) - 8.0 * v(k - 1) + 8.0 * v(k + 1) - v(k + 2)) / (12.0 * h);
        }
        d.at(k) = std::move(m);
    }
    return d;
}

namespace {
void check_same_grid(const GridFunction& a, const GridFunction& b) {
    if (a.points() != b.points() || std::abs(a.t0 - b.t0) > 1e-12 ||
        std::abs(a.t1 - b.t1) > 1e-12)
        throw Error("grid functions live on different grids");
}
}  // namespace

GridFunction pointwise(const GridFunction& a,
                       const std::function<Matrix(const Matrix&)>& fn) {
    GridFunction out;
    out.t0 = a.t0;
    out.t1 = a.t1;
    out.continuity_aligned = a.continuity_aligned;
    out.values.reserve(a.values.size());
    for (const auto& m : a.values) out.values.push_back(fn(m));
    return out;
}

GridFunction pointwise(const GridFunction& a, const GridFunction& b,
                       const std::function<Matrix(const Matrix&, const Matrix&)>& fn) {
    check_same_grid(a, b);
    GridFunction out;
    out.t0 = a.t0;
    out.t1 = a.t1;
    out.continuity_aligned = a.continuity_aligned && b.continuity_aligned;
    out.values.reserve(a.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k)
        out.values.push_back(fn(a.values[k], b.values[k]));
    return out;
}

GridFunction grid_product(const GridFunction& a, const GridFunction& b) {
    return pointwise(a, b, [](const Matrix& x, const Matrix& y) -> Matrix { return x * y; });
}

GridFunction grid_sum(const GridFunction& a, const GridFunction& b) {
    return pointwise(a, b, [](const Matrix& x, const Matrix& y) -> Matrix { return x + y; });
}

GridFunction grid_scale(const GridFunction& a, double s) {
    return pointwise(a, [s](const Matrix& x) -> Matrix { return s * x; });
}

GridFunction grid_transpose(const GridFunction& a) {
    return pointwise(a, [](const Matrix& x) -> Matrix { return x.transpose(); });
}

double grid_distance(const GridFunction& a, const GridFunction& b) {
    check_same_grid(a, b);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        worst = std::max(worst, (a.values[k] - b.values[k]).norm());
    return worst;
}

}  // namespace dae
