#include "daecanon/ivp.hpp"

#include <cmath>

#include "daecanon/rng.hpp"

namespace dae {

std::string Trajectory::to_csv() const {
    std::string out = "t";
    const int m = states.empty() ? 0 : static_cast<int>(states.front().size());
    for (int i = 1; i <= m; ++i) out += ",x" + std::to_string(i);
    out += ",residual\n";
    char buf[64];
    for (int k = 0; k < points(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", times[static_cast<std::size_t>(k)]);
        out += buf;
        for (int i = 0; i < m; ++i) {
            std::snprintf(buf, sizeof buf, ",%.17g", states[static_cast<std::size_t>(k)](i));
            out += buf;
        }
        double res = k < static_cast<int>(residual.size())
                         ? residual[static_cast<std::size_t>(k)]
                         : 0.0;
        std::snprintf(buf, sizeof buf, ",%.17g\n", res);
        out += buf;
    }
    return out;
}

const Vector& Trajectory::state_at(double t) const {
    int best = 0;
    double gap = std::abs(times[0] - t);
    for (int k = 1; k < points(); ++k) {
        double g = std::abs(times[static_cast<std::size_t>(k)] - t);
        if (g < gap) {
            gap = g;
            best = k;
        }
    }
    return states[static_cast<std::size_t>(best)];
}

namespace {

// Per-node right-hand-side matrix A(t) = -E_mu(t)^{-1} F_mu(t) of the
// inherent ODE, as a grid function.
GridFunction inherent_rhs(const ReductionChain& chain) {
    const ReductionLevel& term = chain.terminal();
    return pointwise(term.E, term.F, [](const Matrix& e, const Matrix& f) -> Matrix {
        return -e.partialPivLu().solve(f);
    });
}

// Integrate M' = A(t) M across the whole grid from start_node (both
// directions), midpoint values of A by cubic interpolation.
std::vector<Matrix> rk4_propagate(const GridFunction& A, int start_node,
                                  const Matrix& init) {
    const int n = A.points();
    const double h = A.step();
    std::vector<Matrix> out(static_cast<std::size_t>(n));
    out[static_cast<std::size_t>(start_node)] = init;
    auto step = [&](const Matrix& m, int from, double dir) -> Matrix {
        double t = A.time_at(from);
        const Matrix& a0 = A.at(from);
        Matrix ah = A.eval(t + dir * h / 2.0);
        const Matrix& a1 = A.at(from + static_cast<int>(dir));
        Matrix k1 = a0 * m;
        Matrix k2 = ah * (m + (dir * h / 2.0) * k1);
        Matrix k3 = ah * (m + (dir * h / 2.0) * k2);
        Matrix k4 = a1 * (m + dir * h * k3);
        return m + (dir * h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    for (int k = start_node; k + 1 < n; ++k)
        out[static_cast<std::size_t>(k) + 1] = step(out[static_cast<std::size_t>(k)], k, 1.0);
    for (int k = start_node; k > 0; --k)
        out[static_cast<std::size_t>(k) - 1] = step(out[static_cast<std::size_t>(k)], k, -1.0);
    return out;
}

void attach_residual(Trajectory& traj, const CoefficientPair& pair) {
    const int n = traj.points();
    if (n < 5) return;
    const int m = pair.m;
    GridFunction xg;
    xg.t0 = traj.times.front();
    xg.t1 = traj.times.back();
    xg.continuity_aligned = true;
    for (const auto& s : traj.states) xg.values.push_back(s);
    GridFunction xdot = grid_derivative(xg);
    traj.residual.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double t = traj.times[static_cast<std::size_t>(k)];
        Matrix e = pair.E.eval(t, pair.params);
        Matrix f = pair.F.eval(t, pair.params);
        traj.residual[static_cast<std::size_t>(k)] =
            (e * xdot.at(k) + f * traj.states[static_cast<std::size_t>(k)])
                .lpNorm<Eigen::Infinity>();
    }
}

Trajectory zero_trajectory(const CoefficientPair& pair, const GridFunction& grid) {
    Trajectory traj;
    traj.d = 0;
    for (int k = 0; k < grid.points(); ++k) {
        traj.times.push_back(grid.time_at(k));
        traj.states.push_back(Vector::Zero(pair.m));
        traj.residual.push_back(0.0);
    }
    return traj;
}

}  // namespace

Trajectory solve_homogeneous_ic(const CoefficientPair& pair, const ReductionChain& chain,
                                const Matrix& G_ic, double a, const Vector& x_a) {
    if (!chain.regular()) throw Error("solve_homogeneous: chain is not regular");
    const GridFunction& grid0 = chain.levels.front().E;
    if (chain.d == 0) return zero_trajectory(pair, grid0);
    if (!grid0.is_node(a)) throw Error("solve_homogeneous: a must be a grid node");
    const int start = grid0.node_index(a);

    GridFunction c = chain.mu == 0
                         ? grid_constant(grid0.t0, grid0.t1, grid0.points(),
                                         Matrix::Identity(chain.m, chain.m))
                         : s_can_basis(chain);
    Matrix gc = G_ic * c.at(start);
    Vector rhs = G_ic * x_a;
    // Least-squares solve covers s >= d condition rows.
    Vector xi0 = gc.colPivHouseholderQr().solve(rhs);

    GridFunction a_rhs = inherent_rhs(chain);
    std::vector<Matrix> xi = rk4_propagate(a_rhs, start, Matrix(xi0));

    Trajectory traj;
    traj.d = chain.d;
    for (int k = 0; k < grid0.points(); ++k) {
        traj.times.push_back(grid0.time_at(k));
        traj.states.push_back(c.at(k) * xi[static_cast<std::size_t>(k)]);
    }
    attach_residual(traj, pair);
    return traj;
}

Trajectory solve_homogeneous(const CoefficientPair& pair, const ReductionChain& chain,
                             const CanonicalFrame& frame, double a, const Vector& x_a) {
    if (!chain.regular()) throw Error("solve_homogeneous: chain is not regular");
    if (chain.d == 0) return zero_trajectory(pair, chain.levels.front().E);
    Matrix g_a = ic_matrix(frame, a);
    return solve_homogeneous_ic(pair, chain, g_a, a, x_a);
}

GridFunction maximal_fundamental(const CoefficientPair& pair, const ReductionChain& chain,
                                 const CanonicalFrame& frame, double a) {
    if (!chain.regular()) throw Error("maximal_fundamental: chain is not regular");
    const GridFunction& grid0 = chain.levels.front().E;
    if (!grid0.is_node(a)) throw Error("maximal_fundamental: a must be a grid node");
    const int start = grid0.node_index(a);
    const int d = chain.d;

    GridFunction c = chain.mu == 0
                         ? grid_constant(grid0.t0, grid0.t1, grid0.points(),
                                         Matrix::Identity(chain.m, chain.m))
                         : s_can_basis(chain);
    GridFunction a_rhs = inherent_rhs(chain);
    std::vector<Matrix> phi = rk4_propagate(a_rhs, start, Matrix::Identity(d, d));
    Matrix tail = pinv(c.at(start)) * frame.Pi_can.at(start);

    GridFunction x;
    x.t0 = grid0.t0;
    x.t1 = grid0.t1;
    x.continuity_aligned = true;
    x.values.resize(static_cast<std::size_t>(grid0.points()));
    for (int k = 0; k < grid0.points(); ++k)
        x.at(k) = c.at(k) * phi[static_cast<std::size_t>(k)] * tail;
    return x;
}

Trajectory solve_semiexplicit_index1(const ExprMatrix& F, int r, const ExprMatrix& q,
                                     double t0, double t1, int n, const Params& params,
                                     double a, const Vector& x_a1) {
    const int m = F.rows();
    const int s = m - r;
    if (q.rows() != m || q.cols() != 1) throw Error("semiexplicit: q must be m x 1");

    auto blocks_at = [&](double t, Matrix& f11, Matrix& f12, Matrix& f21, Matrix& f22) {
        Matrix f = F.eval(t, params);
        f11 = f.topLeftCorner(r, r);
        f12 = f.topRightCorner(r, s);
        f21 = f.bottomLeftCorner(s, r);
        f22 = f.bottomRightCorner(s, s);
    };
    auto ode_matrix = [&](double t) -> Matrix {
        Matrix f11, f12, f21, f22;
        blocks_at(t, f11, f12, f21, f22);
        return -(f11 - f12 * f22.partialPivLu().solve(f21));
    };
    auto forcing = [&](double t) -> Vector {
        Matrix f11, f12, f21, f22;
        blocks_at(t, f11, f12, f21, f22);
        Vector qv(m);
        for (int i = 0; i < m; ++i) qv(i) = q.at(i, 0).eval(t, params);
        return qv.head(r) - f12 * f22.partialPivLu().solve(qv.tail(s));
    };

    // U on the doubled grid so Simpson sees the half nodes.
    const int fine_n = 2 * n - 1;
    const double fine_h = (t1 - t0) / (fine_n - 1);
    GridFunction grid_probe = grid_constant(t0, t1, n, Matrix::Zero(1, 1));
    if (!grid_probe.is_node(a)) throw Error("semiexplicit: a must be a grid node");
    const int start_fine = 2 * grid_probe.node_index(a);

    // Check F22 along the fine grid first.
    for (int k = 0; k < fine_n; ++k) {
        Matrix f11, f12, f21, f22;
        blocks_at(t0 + k * fine_h, f11, f12, f21, f22);
        if (rank_of(f22, kRankTol, spectral_norm(f22) + 1.0) != s)
            throw SingularF22Error(k);
    }

    std::vector<Matrix> u(static_cast<std::size_t>(fine_n));
    u[static_cast<std::size_t>(start_fine)] = Matrix::Identity(r, r);
    auto step = [&](const Matrix& mcur, int from, double dir) -> Matrix {
        double t = t0 + from * fine_h;
        Matrix k1 = ode_matrix(t) * mcur;
        Matrix amid = ode_matrix(t + dir * fine_h / 2.0);
        Matrix k2 = amid * (mcur + (dir * fine_h / 2.0) * k1);
        Matrix k3 = amid * (mcur + (dir * fine_h / 2.0) * k2);
        Matrix k4 = ode_matrix(t + dir * fine_h) * (mcur + dir * fine_h * k3);
        return mcur + (dir * fine_h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    for (int k = start_fine; k + 1 < fine_n; ++k)
        u[static_cast<std::size_t>(k) + 1] = step(u[static_cast<std::size_t>(k)], k, 1.0);
    for (int k = start_fine; k > 0; --k)
        u[static_cast<std::size_t>(k) - 1] = step(u[static_cast<std::size_t>(k)], k, -1.0);

    // Cumulative Simpson of U^{-1} (q1 - F12 F22^{-1} q2) from a.
    auto integrand = [&](int fine_k) -> Vector {
        double t = t0 + fine_k * fine_h;
        return u[static_cast<std::size_t>(fine_k)].partialPivLu().solve(forcing(t));
    };
    std::vector<Vector> integral(static_cast<std::size_t>(n));
    const int start = start_fine / 2;
    integral[static_cast<std::size_t>(start)] = Vector::Zero(r);
    const double h = (t1 - t0) / (n - 1);
    for (int k = start; k + 1 < n; ++k)
        integral[static_cast<std::size_t>(k) + 1] =
            integral[static_cast<std::size_t>(k)] +
            (h / 6.0) * (integrand(2 * k) + 4.0 * integrand(2 * k + 1) +
                         integrand(2 * k + 2));
    for (int k = start; k > 0; --k)
        integral[static_cast<std::size_t>(k) - 1] =
            integral[static_cast<std::size_t>(k)] -
            (h / 6.0) * (integrand(2 * k - 2) + 4.0 * integrand(2 * k - 1) +
                         integrand(2 * k));

    Trajectory traj;
    traj.d = r;
    for (int k = 0; k < n; ++k) {
        double t = t0 + k * h;
        const Matrix& uk = u[static_cast<std::size_t>(2 * k)];
        Vector x1 = uk * x_a1 + uk * integral[static_cast<std::size_t>(k)];
        Matrix f11, f12, f21, f22;
        blocks_at(t, f11, f12, f21, f22);
        Vector qv(m);
        for (int i = 0; i < m; ++i) qv(i) = q.at(i, 0).eval(t, params);
        Vector x2 = f22.partialPivLu().solve(qv.tail(s) - f21 * x1);
        Vector x(m);
        x.head(r) = x1;
        x.tail(s) = x2;
        traj.times.push_back(t);
        traj.states.push_back(x);
    }

    // Residual of the full DAE along the grid.
    if (n >= 5) {
        GridFunction xg;
        xg.t0 = t0;
        xg.t1 = t1;
        xg.continuity_aligned = true;
        for (const auto& sv : traj.states) xg.values.push_back(sv);
        GridFunction xdot = grid_derivative(xg);
        Matrix e = Matrix::Zero(m, m);
        e.topLeftCorner(r, r) = Matrix::Identity(r, r);
        traj.residual.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            double t = t0 + k * h;
            Matrix f = F.eval(t, params);
            Vector qv(m);
            for (int i = 0; i < m; ++i) qv(i) = q.at(i, 0).eval(t, params);
            traj.residual[static_cast<std::size_t>(k)] =
                (e * xdot.at(k) + f * traj.states[static_cast<std::size_t>(k)] - qv)
                    .lpNorm<Eigen::Infinity>();
        }
    }
    return traj;
}

PerturbationStudy perturbation_study(const CoefficientPair& pair,
                                     const ReductionChain& chain,
                                     const CanonicalFrame& frame, double a,
                                     const Vector& x_a, int n_samples,
                                     const std::vector<double>& eps_levels,
                                     std::uint64_t seed) {
    PerturbationStudy study;
    study.eps = eps_levels;
    Matrix g_a = ic_matrix(frame, a);
    Matrix g_pinv = pinv(g_a);
    Vector gamma = g_a * x_a;
    double scale = std::max(1.0, gamma.lpNorm<Eigen::Infinity>());

    Trajectory base = solve_homogeneous(pair, chain, frame, a, x_a);

    for (double eps : eps_levels) {
        SplitMix64 rng(seed);  // same directions at every eps level
        double k_hat = 0.0;
        for (int s = 0; s < n_samples; ++s) {
            Vector dir(frame.d);
            for (int i = 0; i < frame.d; ++i) dir(i) = rng.uniform(-1.0, 1.0);
            if (dir.norm() == 0.0) dir(0) = 1.0;
            Vector dgamma = (eps * scale / dir.norm()) * dir;
            Vector x_pert = x_a + g_pinv * dgamma;
            Trajectory pert = solve_homogeneous(pair, chain, frame, a, x_pert);
            double worst = 0.0;
            for (int k = 0; k < base.points(); ++k)
                worst = std::max(worst, (pert.states[static_cast<std::size_t>(k)] -
                                         base.states[static_cast<std::size_t>(k)])
                                            .lpNorm<Eigen::Infinity>());
            k_hat = std::max(k_hat, worst / dgamma.norm());
            if (!std::isfinite(k_hat)) study.finite = false;
        }
        study.K_hat.push_back(k_hat);
    }

    double kmax = 0.0, kmin = std::numeric_limits<double>::infinity();
    for (double k : study.K_hat) {
        kmax = std::max(kmax, k);
        kmin = std::min(kmin, k);
    }
    study.max_rel_spread = kmax > 0.0 ? (kmax - kmin) / kmax : 0.0;
    return study;
}

}  // namespace dae
