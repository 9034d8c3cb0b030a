#include "daecanon/tractability.hpp"

#include <cmath>

namespace dae {

std::vector<int> AdmissibleSequence::r_T_list() const {
    std::vector<int> out;
    for (const auto& lvl : levels) out.push_back(lvl.r_T);
    return out;
}

ProperFactorization proper_factorization(const GridFunction& E, double tol, double anchor) {
    const int n = E.points();
    int r0 = rank_of(E.at(0), tol, anchor);
    GridFunction P0;
    P0.t0 = E.t0;
    P0.t1 = E.t1;
    P0.continuity_aligned = true;
    P0.values.resize(static_cast<std::size_t>(n));
    std::vector<int> bad;
    for (int k = 0; k < n; ++k) {
        if (rank_of(E.at(k), tol, anchor) != r0) bad.push_back(k);
        P0.at(k) = pinv(E.at(k), tol) * E.at(k);  // orthoprojector onto (ker E)^perp
    }
    if (!bad.empty()) throw RankDriftError("E changes rank: no proper factorization", bad);
    ProperFactorization pf;
    pf.A = E;
    pf.D = P0;
    pf.R = P0;
    pf.D_minus = std::move(P0);
    return pf;
}

namespace {

int constant_rank_or_throw(const GridFunction& g, double tol, double anchor,
                           const char* what) {
    int r = rank_of(g.at(0), tol, anchor);
    std::vector<int> bad;
    for (int k = 1; k < g.points(); ++k)
        if (rank_of(g.at(k), tol, anchor) != r) bad.push_back(k);
    if (!bad.empty()) throw RankDriftError(std::string(what) + " changes rank", bad);
    return r;
}

// Aligned orthonormal nullspace basis of a grid function.
GridFunction aligned_nullspace(const GridFunction& g, double tol, double anchor) {
    GridFunction out;
    out.t0 = g.t0;
    out.t1 = g.t1;
    out.continuity_aligned = true;
    out.values.resize(static_cast<std::size_t>(g.points()));
    for (int k = 0; k < g.points(); ++k) {
        SubspaceBasis b = onb_nullspace(g.at(k), tol, anchor);
        out.at(k) = k == 0 ? b.columns : align_to(out.at(k - 1), b);
    }
    return out;
}

}  // namespace

AdmissibleSequence admissible_sequence(const GridFunction& E, const GridFunction& F,
                                       double tol, int level_cap,
                                       ProjectorPolicy policy) {
    const int m = E.rows();
    const int n = E.points();
    if (level_cap < 0) level_cap = m + 1;

    double anchor = 0.0;
    for (int k = 0; k < n; ++k) {
        Matrix ef(m, 2 * m);
        ef.leftCols(m) = E.at(k);
        ef.rightCols(m) = F.at(k);
        anchor = std::max(anchor, spectral_norm(ef));
    }

    AdmissibleSequence seq;
    seq.m = m;
    seq.policy = policy;

    ProperFactorization pf = proper_factorization(E, tol, anchor);
    GridFunction Dprime = grid_derivative(pf.D);

    AdmissibleLevel level0;
    level0.G = grid_product(pf.A, pf.D);
    level0.B = pointwise(F, grid_product(pf.A, Dprime),
                         [](const Matrix& f, const Matrix& ad) -> Matrix { return f - ad; });
    level0.P = pf.D;   // P_0
    level0.Pi = pf.D;  // Pi_0 = P_0
    level0.Q = pointwise(pf.D, [m](const Matrix& p) -> Matrix {
        return Matrix::Identity(m, m) - p;
    });
    level0.r_T = constant_rank_or_throw(level0.G, tol, anchor, "G_0");
    level0.n_dim = m - level0.r_T;

    // Running basis of N_0 + ... + N_i (span only, pointwise).
    std::vector<Matrix> nsum(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        nsum[static_cast<std::size_t>(k)] =
            onb_nullspace(level0.G.at(k), tol, anchor).columns;

    seq.levels.push_back(std::move(level0));

    if (seq.levels[0].r_T == m) {
        // Nonsingular E: index-zero; the sequence has length one and N_can
        // is trivial.
        seq.mu_T = 0;
        seq.regular = true;
        seq.n_can_basis = grid_constant(E.t0, E.t1, n, Matrix(m, 0));
        return seq;
    }

    for (int i = 1; i <= level_cap; ++i) {
        const AdmissibleLevel& prev = seq.levels.back();
        AdmissibleLevel level;
        level.G = pointwise(prev.G, grid_product(prev.B, *prev.Q),
                            [](const Matrix& g, const Matrix& bq) -> Matrix { return g + bq; });
        level.r_T = constant_rank_or_throw(level.G, tol, anchor, "G_i");
        level.n_dim = m - level.r_T;

        if (level.r_T == m) {
            seq.mu_T = i;
            seq.regular = true;
            seq.n_can_basis = aligned_nullspace(*prev.Pi, tol, 1.0);
            seq.levels.push_back(std::move(level));
            return seq;
        }

        // Q_i: projector onto N_i = ker G_i along an admissible complement.
        GridFunction Q, P, Pi;
        Q.t0 = P.t0 = Pi.t0 = E.t0;
        Q.t1 = P.t1 = Pi.t1 = E.t1;
        Q.continuity_aligned = P.continuity_aligned = Pi.continuity_aligned = true;
        Q.values.resize(static_cast<std::size_t>(n));
        P.values.resize(static_cast<std::size_t>(n));
        Pi.values.resize(static_cast<std::size_t>(n));

        int n_hat_dim = -1, theta_hat = -1;
        const double tol_s = subspace_decision_tol(tol);
        for (int k = 0; k < n; ++k) {
            SubspaceBasis Ni = onb_nullspace(level.G.at(k), tol, anchor);
            SubspaceBasis Nsum_prev(nsum[static_cast<std::size_t>(k)]);
            SubspaceBasis Nhat = subspace_intersect(Nsum_prev, Ni, tol_s);

            // S_i = {z : B_0 z in im G_i}; its intersection with N_i has the
            // reduction dimension theta_i and signals the terminal level.
            Matrix img_perp = Matrix::Identity(m, m) -
                              orthoprojector(onb_range(level.G.at(k), tol, anchor));
            SubspaceBasis Si =
                onb_nullspace(img_perp * seq.levels[0].B.at(k), tol_s, anchor);
            SubspaceBasis NiSi = subspace_intersect(Ni, Si, tol_s);

            if (k == 0) {
                n_hat_dim = Nhat.dim();
                theta_hat = NiSi.dim();
            } else if (Nhat.dim() != n_hat_dim || NiSi.dim() != theta_hat) {
                throw RankDriftError("admissible sequence: intersection dims vary", {k});
            }

            SubspaceBasis along;
            if (policy == ProjectorPolicy::PaperTerminal && NiSi.dim() == 0 &&
                Si.dim() == m - Ni.dim()) {
                along = Si;
            } else {
                // Widely orthogonal: along (N_0+..+N_i)^perp plus X_i, the
                // part of N_0+..+N_{i-1} transversal to N-hat.
                Matrix stacked(m, Nsum_prev.dim() + Ni.dim());
                if (Nsum_prev.dim() > 0) stacked.leftCols(Nsum_prev.dim()) = Nsum_prev.columns;
                stacked.rightCols(Ni.dim()) = Ni.columns;
                SubspaceBasis nsum_new = onb_range(stacked, tol);
                SubspaceBasis perp = onb_nullspace(nsum_new.columns.transpose(), tol);
                Matrix x = Nsum_prev.columns;
                if (Nhat.dim() > 0)
                    x = onb_range((Matrix::Identity(m, m) - orthoprojector(Nhat)) * x, tol)
                            .columns;
                Matrix alongcols(m, perp.dim() + x.cols());
                alongcols.leftCols(perp.dim()) = perp.columns;
                alongcols.rightCols(x.cols()) = x;
                along = SubspaceBasis(alongcols);
            }
            try {
                Q.at(k) = projector_onto(Ni, along, tol).P;
            } catch (const ComplementError&) {
                throw NotRegularTractabilityError(
                    "admissible complement failed at node " + std::to_string(k));
            }
            P.at(k) = Matrix::Identity(m, m) - Q.at(k);
            Pi.at(k) = prev.Pi->at(k) * P.at(k);

            // Extend the N-sum span.
            Matrix ext(m, nsum[static_cast<std::size_t>(k)].cols() + Ni.dim());
            ext.leftCols(nsum[static_cast<std::size_t>(k)].cols()) =
                nsum[static_cast<std::size_t>(k)];
            ext.rightCols(Ni.dim()) = Ni.columns;
            nsum[static_cast<std::size_t>(k)] = onb_range(ext, tol).columns;
        }
        level.n_hat_dim = n_hat_dim;
        level.theta_hat = theta_hat;
        level.Q = std::move(Q);
        level.P = std::move(P);
        level.Pi = std::move(Pi);

        // B_i = B_{i-1} P_{i-1} - G_i D^- (D Pi_i D^-)' D Pi_{i-1}
        GridFunction dpid = grid_product(grid_product(pf.D, *level.Pi), pf.D_minus);
        GridFunction dpid_prime = grid_derivative(dpid);
        GridFunction correction = grid_product(
            grid_product(grid_product(level.G, pf.D_minus), dpid_prime),
            grid_product(pf.D, *prev.Pi));
        GridFunction bp = grid_product(prev.B, *prev.P);
        level.B = pointwise(bp, correction,
                            [](const Matrix& x, const Matrix& y) -> Matrix { return x - y; });

        seq.levels.push_back(std::move(level));
    }
    throw NotRegularTractabilityError("rank G_i never reached m within the level cap");
}

AdmissibleSequence admissible_sequence(const CoefficientPair& pair, int grid_n, double tol,
                                       int level_cap, ProjectorPolicy policy) {
    GridFunction e = pair.E.sample(pair.t0, pair.t1, grid_n, pair.params);
    GridFunction f = pair.F.sample(pair.t0, pair.t1, grid_n, pair.params);
    return admissible_sequence(e, f, tol, level_cap, policy);
}

GridFunction n_can_via_tractability(const AdmissibleSequence& seq) {
    if (!seq.regular)
        throw NotRegularTractabilityError("sequence did not terminate regularly");
    return seq.n_can_basis;
}

}  // namespace dae
