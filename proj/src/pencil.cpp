#include "daecanon/pencil.hpp"

#include <cmath>

namespace dae {

namespace {

// Preimage {z : M z in span(S)} as an orthonormal basis.
SubspaceBasis preimage(const Matrix& M, const SubspaceBasis& span, double tol_rel) {
    const int m = static_cast<int>(M.rows());
    Matrix complement = Matrix::Identity(m, m) - orthoprojector(span);
    return onb_nullspace(complement * M, tol_rel, spectral_norm(M));
}

}  // namespace

bool is_regular_pencil(const Matrix& E, const Matrix& F, double tol_rel) {
    const int m = static_cast<int>(E.rows());
    if (m == 0) return false;
    for (int k = 0; k <= m; ++k) {
        double lambda = k + 0.5;
        Matrix probe = lambda * E + F;
        if (rank_of(probe, tol_rel) == m) return true;
    }
    return false;
}

std::pair<SubspaceBasis, SubspaceBasis> wong_sequences(const Matrix& E, const Matrix& F,
                                                       double tol_rel) {
    const int m = static_cast<int>(E.rows());
    SubspaceBasis v(Matrix::Identity(m, m));
    for (;;) {
        SubspaceBasis next = preimage(F, SubspaceBasis(onb_range(E * v.columns, tol_rel,
                                                                spectral_norm(E)).columns),
                                      tol_rel);
        if (next.dim() == v.dim()) break;
        v = next;
    }
    SubspaceBasis w(Matrix(m, 0));
    for (;;) {
        SubspaceBasis next = preimage(E, SubspaceBasis(onb_range(F * w.columns, tol_rel,
                                                                spectral_norm(F)).columns),
                                      tol_rel);
        if (next.dim() == w.dim()) break;
        w = next;
    }
    if (v.dim() + w.dim() != m)
        throw NotRegularError("Wong sequences are not complementary (dims " +
                              std::to_string(v.dim()) + " + " + std::to_string(w.dim()) +
                              " != " + std::to_string(m) + ")");
    Matrix stacked(m, m);
    if (v.dim() > 0) stacked.leftCols(v.dim()) = v.columns;
    if (w.dim() > 0) stacked.rightCols(w.dim()) = w.columns;
    if (rank_of(stacked, tol_rel) != m)
        throw NotRegularError("Wong limits fail to span R^m at the rank tolerance");
    return {v, w};
}

PencilForm quasi_weierstrass(const Matrix& E, const Matrix& F, double tol_rel) {
    const int m = static_cast<int>(E.rows());
    if (!is_regular_pencil(E, F, tol_rel))
        throw NotRegularError("matrix pencil is singular");
    auto [v, w] = wong_sequences(E, F, tol_rel);
    const int d = v.dim();

    PencilForm form;
    form.m = m;
    form.d = d;
    form.T = Matrix(m, m);
    if (d > 0) form.T.leftCols(d) = v.columns;
    if (m - d > 0) form.T.rightCols(m - d) = w.columns;

    Matrix lhs(m, m);
    if (d > 0) lhs.leftCols(d) = E * v.columns;
    if (m - d > 0) lhs.rightCols(m - d) = F * w.columns;
    form.cond_T = condition_number(lhs);
    if (rank_of(lhs, tol_rel) != m)
        throw NotRegularError("[E V* | F W*] is singular: pencil too ill-conditioned");
    form.S = lhs.fullPivLu().inverse();

    Matrix set = form.S * E * form.T;
    Matrix sft = form.S * F * form.T;
    form.W_block = sft.topLeftCorner(d, d);
    form.N_block = set.bottomRightCorner(m - d, m - d);

    // Nilpotency index of N.
    if (d == m) {
        form.mu = 0;
    } else {
        double anchor = std::max(1.0, spectral_norm(form.N_block));
        Matrix p = Matrix::Identity(m - d, m - d);
        int mu = 0;
        while (rank_of(p, tol_rel, anchor) > 0) {
            p = p * form.N_block;
            ++mu;
            if (mu > m) throw NotRegularError("nilpotent block fails to vanish");
        }
        form.mu = mu;
    }

    Matrix proj = Matrix::Zero(m, m);
    proj.topLeftCorner(d, d) = Matrix::Identity(d, d);
    form.Pi_can = form.T * proj * form.T.fullPivLu().inverse();
    form.S_can = v;
    form.N_can = w;
    return form;
}

std::vector<int> jordan_block_counts(const PencilForm& form, double tol_rel) {
    std::vector<int> theta;
    if (form.mu <= 1) return theta;
    const Matrix& nb = form.N_block;
    double anchor = std::max(1.0, spectral_norm(nb));
    // rank N^k for k = 1..mu
    std::vector<int> ranks;
    Matrix p = nb;
    for (int k = 1; k <= form.mu; ++k) {
        ranks.push_back(rank_of(p, tol_rel, anchor));
        p = p * nb;
    }
    ranks.push_back(0);  // N^{mu+1}
    for (int i = 0; i + 2 <= form.mu; ++i)
        theta.push_back(ranks[static_cast<std::size_t>(i)] -
                        ranks[static_cast<std::size_t>(i) + 1]);
    return theta;
}

std::vector<int> jordan_block_counts(const Matrix& E, const Matrix& F, double tol_rel) {
    return jordan_block_counts(quasi_weierstrass(E, F, tol_rel), tol_rel);
}

Trajectory solve_constant_ivp(const Matrix& E, const Matrix& F, const ExprMatrix& q,
                              const Vector& x_a, double a, double t1, int n,
                              const Params& params, double tol_rel) {
    const int m = static_cast<int>(E.rows());
    if (q.rows() != m || q.cols() != 1) throw Error("solve_constant_ivp: q must be m x 1");
    PencilForm form = quasi_weierstrass(E, F, tol_rel);
    const int d = form.d;

    // Decoupled right-hand sides: [f; g] = S q, symbolically.
    ExprMatrix sq = ExprMatrix::from_matrix(form.S) * q;
    // g derivative chain for the nilpotent sum.
    std::vector<ExprMatrix> g_derivs;  // g^{(j)}, j = 0..mu-1, each (m-d) x 1
    if (m - d > 0) {
        ExprMatrix g(m - d, 1);
        for (int i = 0; i < m - d; ++i) g.at(i, 0) = sq.at(d + i, 0);
        g_derivs.push_back(g);
        for (int j = 1; j < std::max(1, form.mu); ++j)
            g_derivs.push_back(g_derivs.back().derivative());
    }

    Matrix t_inv = form.T.fullPivLu().inverse();
    Vector u = d > 0 ? Vector((t_inv * x_a).head(d)) : Vector(0);

    const double h = (t1 - a) / (n - 1);
    Matrix e_full, e_half;
    if (d > 0) {
        e_full = expm(-h * form.W_block);
        e_half = expm(-(h / 2.0) * form.W_block);
    }

    auto f_at = [&](double t) -> Vector {
        Vector f(d);
        for (int i = 0; i < d; ++i) f(i) = sq.at(i, 0).eval(t, params);
        return f;
    };
    auto v_at = [&](double t) -> Vector {
        if (m - d == 0) return Vector(0);
        Vector v = Vector::Zero(m - d);
        Matrix npow = Matrix::Identity(m - d, m - d);
        double sign = 1.0;
        for (int j = 0; j < form.mu; ++j) {
            Vector gj(m - d);
            for (int i = 0; i < m - d; ++i)
                gj(i) = g_derivs[static_cast<std::size_t>(j)].at(i, 0).eval(t, params);
            v += sign * npow * gj;
            npow = npow * form.N_block;
            sign = -sign;
        }
        return v;
    };

    Trajectory traj;
    traj.d = d;
    traj.times.resize(static_cast<std::size_t>(n));
    traj.states.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double t = a + k * h;
        traj.times[static_cast<std::size_t>(k)] = t;
        Vector xv(m);
        if (d > 0) xv.head(d) = u;
        if (m - d > 0) xv.tail(m - d) = v_at(t);
        traj.states[static_cast<std::size_t>(k)] = form.T * xv;
        if (k + 1 < n && d > 0) {
            // u(t+h) = e^{-hW} u(t) + int_t^{t+h} e^{(s-t-h)W} f(s) ds, Simpson.
            Vector quad = e_full * f_at(t) + 4.0 * (e_half * f_at(t + h / 2.0)) +
                          f_at(t + h);
            u = e_full * u + (h / 6.0) * quad;
        }
    }

    // Residual with finite-difference x'.
    if (n >= 5) {
        GridFunction xg;
        xg.t0 = a;
        xg.t1 = t1;
        xg.continuity_aligned = true;
        for (const auto& s : traj.states) xg.values.push_back(s);
        GridFunction xdot = grid_derivative(xg);
        traj.residual.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            double t = a + k * h;
            Vector qv(m);
            for (int i = 0; i < m; ++i) qv(i) = q.at(i, 0).eval(t, params);
            traj.residual[static_cast<std::size_t>(k)] =
                (E * xdot.at(k) + F * traj.states[static_cast<std::size_t>(k)] - qv)
                    .lpNorm<Eigen::Infinity>();
        }
    }
    for (const auto& s : traj.states)
        if (!s.allFinite()) throw NonfiniteResultError("constant-coefficient solve diverged");
    return traj;
}

}  // namespace dae
