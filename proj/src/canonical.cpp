#include "daecanon/canonical.hpp"

#include <cmath>

namespace dae {

CoefficientPair adjoint_pair(const CoefficientPair& pair) {
    CoefficientPair adj;
    adj.m = pair.m;
    adj.t0 = pair.t0;
    adj.t1 = pair.t1;
    adj.params = pair.params;
    ExprMatrix et = pair.E.transpose();
    adj.E = et.scaled(Expr::literal(-1.0));
    adj.F = pair.F.transpose() - pair.E.derivative().transpose();
    return adj;
}

GridFunction n_can_via_adjoint(const CoefficientPair& pair, const ReductionChain& chain,
                               const ReductionChain& adjoint_chain, double tol) {
    if (!chain.regular()) throw Error("n_can_via_adjoint: original pair not regular");
    if (!adjoint_chain.regular() || adjoint_chain.mu != chain.mu ||
        adjoint_chain.d != chain.d || adjoint_chain.r_list() != chain.r_list() ||
        adjoint_chain.theta_list() != chain.theta_list())
        throw AdjointNotRegularError(
            "adjoint pair does not reproduce the original characteristics");

    GridFunction cstar = s_can_basis(adjoint_chain);
    const int n = cstar.points();
    GridFunction e = pair.E.sample(pair.t0, pair.t1, n, pair.params);

    GridFunction out;
    out.t0 = cstar.t0;
    out.t1 = cstar.t1;
    out.continuity_aligned = true;
    out.values.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        Matrix ge = cstar.at(k).transpose() * e.at(k);
        SubspaceBasis ker =
            onb_nullspace(ge, subspace_decision_tol(tol), spectral_norm(ge));
        if (ker.dim() != pair.m - chain.d)
            throw AdjointNotRegularError("ker C_*^T E has wrong dimension at node " +
                                         std::to_string(k));
        out.at(k) = k == 0 ? ker.columns : align_to(out.at(k - 1), ker);
    }
    return out;
}

GridFunction canonical_projector(const GridFunction& C_Scan, const GridFunction& C_Ncan,
                                 std::vector<double>* condition_log) {
    const int n = C_Scan.points();
    const int m = C_Scan.rows();
    const int d = C_Scan.cols();
    GridFunction pi;
    pi.t0 = C_Scan.t0;
    pi.t1 = C_Scan.t1;
    pi.continuity_aligned = true;
    pi.values.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        Matrix M(m, m);
        if (d > 0) M.leftCols(d) = C_Scan.at(k);
        if (m - d > 0) M.rightCols(m - d) = C_Ncan.at(k);
        double cond = condition_number(M);
        if (condition_log) condition_log->push_back(cond);
        if (!(cond < 1e12))
            throw ComplementError("S_can and N_can fail to be complementary", k);
        Matrix target = Matrix::Zero(m, m);
        if (d > 0) target.leftCols(d) = C_Scan.at(k);
        pi.at(k) = M.transpose().partialPivLu().solve(target.transpose()).transpose();
    }
    return pi;
}

CanonicalFrame canonical_frame(const CoefficientPair& pair, const ReductionChain& chain,
                               const ReductionChain& adjoint_chain, double tol) {
    if (!chain.regular()) throw Error("canonical_frame: pair is not regular");
    CanonicalFrame frame;
    frame.m = chain.m;
    frame.d = chain.d;
    if (chain.d == 0)
        throw ZeroFlowError();
    frame.C_Scan = s_can_basis(chain);
    frame.C_Sstar = s_can_basis(adjoint_chain);
    frame.C_Ncan = n_can_via_adjoint(pair, chain, adjoint_chain, tol);
    frame.Pi_can = canonical_projector(frame.C_Scan, frame.C_Ncan, &frame.condition_M);

    const int n = frame.C_Scan.points();
    GridFunction e = pair.E.sample(pair.t0, pair.t1, n, pair.params);
    frame.G = pointwise(frame.C_Sstar, e, [](const Matrix& cs, const Matrix& ev) -> Matrix {
        return cs.transpose() * ev;
    });
    return frame;
}

CanonicalFrame canonical_frame(const CoefficientPair& pair, int grid_n, double tol) {
    ReductionChain chain = reduce_full(pair, grid_n, tol);
    if (!chain.regular())
        throw Error("canonical_frame: verdict " + to_string(chain.verdict));
    ReductionChain adj = reduce_full(adjoint_pair(pair), grid_n, tol);
    return canonical_frame(pair, chain, adj, tol);
}

Matrix ic_matrix(const CanonicalFrame& frame, double a) {
    return frame.G.eval(a);
}

ICEquivalenceReport check_accurate_conditions_equivalence(const CanonicalFrame& frame,
                                                          double a, const Vector& x_a) {
    ICEquivalenceReport rep;
    const int m = frame.m, d = frame.d;
    Matrix cs = frame.C_Scan.eval(a);
    Matrix cn = frame.C_Ncan.eval(a);
    Matrix pi = frame.Pi_can.eval(a);
    Matrix g = frame.G.eval(a);

    // Route 1: x(a) = Pi_can(a) x_a.
    rep.x_from_projector = pi * x_a;

    // Route 2: x(a) in S_can with x(a) - x_a in N_can: solve the stacked
    // system [C_Scan  -C_Ncan] [xi; eta] = x_a.
    Matrix stacked(m, m);
    stacked.leftCols(d) = cs;
    stacked.rightCols(m - d) = -cn;
    Vector coeffs = stacked.partialPivLu().solve(x_a);
    rep.x_from_membership = cs * coeffs.head(d);

    // Route 3: G_a x(a) = G_a x_a on the flow: (G_a C_Scan) xi = G_a x_a.
    Matrix gc = g * cs;
    Vector xi = gc.partialPivLu().solve(g * x_a);
    rep.x_from_gmatrix = cs * xi;

    rep.max_discrepancy =
        std::max((rep.x_from_projector - rep.x_from_membership).norm(),
                 std::max((rep.x_from_projector - rep.x_from_gmatrix).norm(),
                          (rep.x_from_membership - rep.x_from_gmatrix).norm()));
    return rep;
}

}  // namespace dae
