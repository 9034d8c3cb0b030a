#include "daecanon/reduction.hpp"

#include <cmath>

namespace dae {

std::string to_string(VerdictKind v) {
    switch (v) {
        case VerdictKind::Regular: return "regular";
        case VerdictKind::NotPreRegular: return "not-pre-regular";
        case VerdictKind::RankDrift: return "rank-drift";
    }
    return "?";
}

std::vector<int> ReductionChain::r_list() const {
    std::vector<int> out;
    for (int j = 0; j < mu; ++j) out.push_back(levels[static_cast<std::size_t>(j)].r);
    return out;
}

std::vector<int> ReductionChain::theta_list() const {
    std::vector<int> out;
    for (int j = 0; j < mu; ++j) out.push_back(levels[static_cast<std::size_t>(j)].theta);
    return out;
}

const ReductionLevel& ReductionChain::terminal() const {
    if (!regular() || zero_flow) throw Error("chain has no terminal inherent pair");
    return levels.back();
}

PreRegularityReport pre_regularity(const GridFunction& E, const GridFunction& F,
                                   double tol, double anchor) {
    return pre_regularity(E, F, tol, subspace_decision_tol(tol), anchor);
}

PreRegularityReport pre_regularity(const GridFunction& E, const GridFunction& F,
                                   double tol_rank, double tol_sub, double anchor) {
    PreRegularityReport rep;
    const int n = E.points();
    const int m = E.rows();
    rep.rank_E.reserve(static_cast<std::size_t>(n));
    rep.rank_EF.reserve(static_cast<std::size_t>(n));
    rep.theta_nodes.reserve(static_cast<std::size_t>(n));
    rep.min_sigma_EF.reserve(static_cast<std::size_t>(n));

    for (int k = 0; k < n; ++k) {
        const Matrix& e = E.at(k);
        const Matrix& f = F.at(k);
        Matrix ef(m, 2 * m);
        ef.leftCols(m) = e;
        ef.rightCols(m) = f;
        rep.rank_E.push_back(rank_of(e, tol_rank, anchor));
        rep.rank_EF.push_back(rank_of(ef, tol_rank, anchor));
        Eigen::JacobiSVD<Matrix> svd(ef);
        rep.min_sigma_EF.push_back(svd.singularValues()(m - 1));

        SubspaceBasis nsp = onb_nullspace(e, tol_rank, anchor);
        SubspaceBasis z = onb_corange(e, tol_rank, anchor);
        SubspaceBasis s = onb_nullspace(z.columns.transpose() * f, tol_sub, anchor);
        rep.theta_nodes.push_back(subspace_intersect(nsp, s, tol_sub).dim());
    }

    rep.r = rep.rank_E[0];
    rep.theta = rep.theta_nodes[0];
    for (int k = 0; k < n; ++k) {
        bool bad = false;
        if (rep.rank_E[static_cast<std::size_t>(k)] != rep.r ||
            rep.theta_nodes[static_cast<std::size_t>(k)] != rep.theta) {
            rep.drift = true;
            bad = true;
        }
        if (rep.rank_EF[static_cast<std::size_t>(k)] != m) {
            rep.full_row_rank = false;
            bad = true;
        }
        if (bad) rep.failure_nodes.push_back(k);
    }
    rep.ok = !rep.drift && rep.full_row_rank;
    if (rep.drift)
        rep.message = "rank or intersection dimension varies across grid nodes";
    else if (!rep.full_row_rank)
        rep.message = "[E F] fails to have full row rank";
    return rep;
}

PreRegularityReport pre_regularity(const CoefficientPair& pair, int grid_n, double tol) {
    GridFunction e = pair.E.sample(pair.t0, pair.t1, grid_n, pair.params);
    GridFunction f = pair.F.sample(pair.t0, pair.t1, grid_n, pair.params);
    double anchor = 0.0;
    for (int k = 0; k < grid_n; ++k) {
        Matrix ef(pair.m, 2 * pair.m);
        ef.leftCols(pair.m) = e.at(k);
        ef.rightCols(pair.m) = f.at(k);
        anchor = std::max(anchor, spectral_norm(ef));
    }
    return pre_regularity(e, f, tol, anchor);
}

std::pair<GridFunction, GridFunction> reduce_once(ReductionLevel& level, double tol,
                                                  double anchor) {
    const int n = level.E.points();
    const int m = level.m_j;
    const int r = level.r;

    GridFunction Y, Z, C;
    Y.t0 = Z.t0 = C.t0 = level.E.t0;
    Y.t1 = Z.t1 = C.t1 = level.E.t1;
    Y.continuity_aligned = Z.continuity_aligned = C.continuity_aligned = true;
    Y.values.resize(static_cast<std::size_t>(n));
    Z.values.resize(static_cast<std::size_t>(n));
    C.values.resize(static_cast<std::size_t>(n));

    for (int k = 0; k < n; ++k) {
        const Matrix& e = level.E.at(k);
        const Matrix& f = level.F.at(k);
        SubspaceBasis y = onb_range(e, tol, anchor);
        SubspaceBasis z = onb_corange(e, tol, anchor);
        if (y.dim() != r)
            throw RankDriftError("rank of E changed during reduction step", {k});
        SubspaceBasis s =
            onb_nullspace(z.columns.transpose() * f, subspace_decision_tol(tol), anchor);
        if (s.dim() != r)
            throw RankDriftError("dim ker(Z^T F) != r during reduction step", {k});
        if (k == 0) {
            Y.at(0) = y.columns;
            Z.at(0) = z.columns;
            C.at(0) = s.columns;
        } else {
            Y.at(k) = align_to(Y.at(k - 1), y);
            Z.at(k) = align_to(Z.at(k - 1), z);
            C.at(k) = align_to(C.at(k - 1), s);
        }
    }

    GridFunction Cdot = grid_derivative(C);

    GridFunction nextE, nextF;
    nextE.t0 = nextF.t0 = level.E.t0;
    nextE.t1 = nextF.t1 = level.E.t1;
    nextE.continuity_aligned = nextF.continuity_aligned = true;
    nextE.values.resize(static_cast<std::size_t>(n));
    nextF.values.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Matrix& e = level.E.at(k);
        const Matrix& f = level.F.at(k);
        nextE.at(k) = Y.at(k).transpose() * e * C.at(k);
        nextF.at(k) = Y.at(k).transpose() * (f * C.at(k) + e * Cdot.at(k));
    }

    level.Y = std::move(Y);
    level.Z = std::move(Z);
    level.C = std::move(C);
    level.Cdot = std::move(Cdot);
    (void)m;
    return {std::move(nextE), std::move(nextF)};
}

ReductionChain reduce_full(GridFunction E0, GridFunction F0, double tol) {
    ReductionChain chain;
    chain.m = E0.rows();
    chain.tol = tol;
    const int n = E0.points();
    double anchor = 0.0;
    for (int k = 0; k < n; ++k) {
        Matrix ef(chain.m, 2 * chain.m);
        ef.leftCols(chain.m) = E0.at(k);
        ef.rightCols(chain.m) = F0.at(k);
        anchor = std::max(anchor, spectral_norm(ef));
    }
    chain.anchor = anchor;

    GridFunction curE = std::move(E0);
    GridFunction curF = std::move(F0);
    const int cap = chain.m + 1;
    int prev_r = -1, prev_theta = -1;

    for (int j = 0; j <= cap; ++j) {
        // Level 0 is sampled exactly and honors the caller's tolerance; the
        // deeper pairs inherit the O(h^4) derivative error through the C
        // bases, so their rank decisions get the subspace floor as well.
        double tol_j = j == 0 ? tol : subspace_decision_tol(tol);
        ReductionLevel level;
        level.m_j = curE.rows();
        level.E = std::move(curE);
        level.F = std::move(curF);
        level.prereg =
            pre_regularity(level.E, level.F, tol_j, subspace_decision_tol(tol), anchor);
        level.r = level.prereg.r;
        level.theta = level.prereg.theta;

        if (j > 0 && level.prereg.ok &&
            (level.r != prev_r - prev_theta || level.theta > prev_theta)) {
            // r_{j+1} = r_j - theta_j and a nonincreasing theta sequence are
            // forced by the theory; a mismatch is a tolerance artefact, not
            // a structural verdict.
            chain.verdict = VerdictKind::RankDrift;
            chain.failed_level = j;
            chain.levels.push_back(std::move(level));
            return chain;
        }
        prev_r = level.r;
        prev_theta = level.theta;

        if (!level.prereg.ok) {
            chain.verdict =
                level.prereg.drift ? VerdictKind::RankDrift : VerdictKind::NotPreRegular;
            chain.failed_level = j;
            chain.levels.push_back(std::move(level));
            return chain;
        }

        if (level.theta == 0) {
            if (level.r == level.m_j) {
                // Nonsingular E_j: an implicit ODE; index zero when j == 0.
                chain.mu = j;
                chain.d = level.m_j;
                double smin = std::numeric_limits<double>::infinity();
                for (int k = 0; k < n; ++k) {
                    Eigen::JacobiSVD<Matrix> svd(level.E.at(k));
                    smin = std::min(smin, svd.singularValues()(level.m_j - 1));
                }
                level.min_sigma_E = smin;
                chain.levels.push_back(std::move(level));
                chain.verdict = VerdictKind::Regular;
                return chain;
            }
            if (level.r == 0) {
                // E vanishes, F nonsingular: the zero flow.
                chain.mu = j + 1;
                chain.d = 0;
                chain.zero_flow = true;
                chain.levels.push_back(std::move(level));
                chain.verdict = VerdictKind::Regular;
                return chain;
            }
            // Index-one behaviour at this level: one more step yields the
            // nonsingular inherent pair.
            auto [nE, nF] = reduce_once(level, tol_j, anchor);
            int d = level.r;
            chain.levels.push_back(std::move(level));

            ReductionLevel terminal;
            terminal.m_j = d;
            terminal.E = std::move(nE);
            terminal.F = std::move(nF);
            terminal.r = d;
            terminal.theta = 0;
            double smin = std::numeric_limits<double>::infinity();
            std::vector<int> bad;
            for (int k = 0; k < n; ++k) {
                if (rank_of(terminal.E.at(k), subspace_decision_tol(tol), anchor) != d)
                    bad.push_back(k);
                Eigen::JacobiSVD<Matrix> svd(terminal.E.at(k));
                smin = std::min(smin, svd.singularValues()(d - 1));
            }
            terminal.min_sigma_E = smin;
            if (!bad.empty())
                throw RankDriftError("terminal E_mu is singular although theta = 0", bad);
            chain.levels.push_back(std::move(terminal));
            chain.mu = j + 1;
            chain.d = d;
            chain.verdict = VerdictKind::Regular;
            return chain;
        }

        // theta > 0: descend one level.
        auto [nE, nF] = reduce_once(level, tol_j, anchor);
        int expected = level.r - level.theta;
        chain.levels.push_back(std::move(level));
        curE = std::move(nE);
        curF = std::move(nF);
        // r_{j+1} = r_j - theta_j is a theorem; a violation is a tolerance
        // failure and will surface as drift on the next level.
        (void)expected;
    }
    chain.verdict = VerdictKind::NotPreRegular;
    chain.failed_level = cap + 1;
    return chain;
}

ReductionChain reduce_full(const CoefficientPair& pair, int grid_n, double tol) {
    GridFunction e = pair.E.sample(pair.t0, pair.t1, grid_n, pair.params);
    GridFunction f = pair.F.sample(pair.t0, pair.t1, grid_n, pair.params);
    return reduce_full(std::move(e), std::move(f), tol);
}

GridFunction s_can_basis(const ReductionChain& chain) {
    if (!chain.regular()) throw Error("s_can_basis: chain is not regular");
    if (chain.d == 0) throw ZeroFlowError();
    const GridFunction& grid0 = chain.levels.front().E;
    const int n = grid0.points();
    GridFunction out;
    out.t0 = grid0.t0;
    out.t1 = grid0.t1;
    out.continuity_aligned = true;
    out.values.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        Matrix prod = Matrix::Identity(chain.m, chain.m);
        for (int j = 0; j < chain.mu; ++j)
            prod = prod * chain.levels[static_cast<std::size_t>(j)].C->at(k);
        out.at(k) = prod;
        if (rank_of(prod, subspace_decision_tol(chain.tol)) != chain.d)
            throw RankDriftError("S_can basis lost column rank", {k});
    }
    return out;
}

std::vector<SubspaceChainEntry> subspace_chain(const ReductionChain& chain) {
    if (!chain.regular()) throw Error("subspace_chain: chain is not regular");
    std::vector<SubspaceChainEntry> out;
    const GridFunction& E0 = chain.levels.front().E;
    const int n = E0.points();
    const int m = chain.m;
    int depth = chain.zero_flow ? chain.mu - 1 : chain.mu;
    if (chain.mu == 0) depth = 0;
    Matrix prev;  // for alignment per entry
    for (int j = 0; j < depth; ++j) {
        if (!chain.levels[static_cast<std::size_t>(j)].C) break;
        SubspaceChainEntry entry;
        entry.dim = chain.levels[static_cast<std::size_t>(j)].r;
        entry.basis.t0 = E0.t0;
        entry.basis.t1 = E0.t1;
        entry.basis.continuity_aligned = true;
        entry.basis.values.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            Matrix prod = Matrix::Identity(m, m);
            for (int i = 0; i <= j; ++i)
                prod = prod * chain.levels[static_cast<std::size_t>(i)].C->at(k);
            SubspaceBasis b = orthonormalize(prod, chain.tol);
            entry.basis.at(k) = k == 0 ? b.columns : align_to(entry.basis.at(k - 1), b);
            SubspaceBasis kerE = onb_nullspace(E0.at(k), chain.tol, chain.anchor);
            entry.intersect_dims.push_back(
                subspace_intersect(SubspaceBasis(entry.basis.at(k)), kerE, chain.tol).dim());
        }
        out.push_back(std::move(entry));
    }
    return out;
}

CoefficientPair apply_equivalence(const CoefficientPair& pair, const ExprMatrix& L,
                                  const ExprMatrix& K, int check_grid_n, double tol) {
    if (L.rows() != pair.m || L.cols() != pair.m || K.rows() != pair.m ||
        K.cols() != pair.m)
        throw Error("apply_equivalence: transform size mismatch");
    for (int k = 0; k < check_grid_n; ++k) {
        double t = pair.t0 + (pair.t1 - pair.t0) * k / (check_grid_n - 1);
        Matrix lv = L.eval(t, pair.params);
        Matrix kv = K.eval(t, pair.params);
        double al = spectral_norm(lv), ak = spectral_norm(kv);
        if (rank_of(lv, tol, al) != pair.m)
            throw SingularTransformError("L(t) singular", k);
        if (rank_of(kv, tol, ak) != pair.m)
            throw SingularTransformError("K(t) singular", k);
    }
    CoefficientPair out;
    out.m = pair.m;
    out.t0 = pair.t0;
    out.t1 = pair.t1;
    out.params = pair.params;
    out.E = L * pair.E * K;
    out.F = L * pair.F * K + L * pair.E * K.derivative();
    return out;
}

}  // namespace dae
