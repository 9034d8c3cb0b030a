#pragma once

#include "daecanon/reduction.hpp"

namespace dae {

/// The canonical objects on one grid: flow basis, adjoint flow basis, the
/// complement N_can = ker(C_*^T E), the projector Pi_can onto S_can along
/// N_can, and the accurate-initial-condition matrix function G = C_*^T E.
struct CanonicalFrame {
    int m = 0;
    int d = 0;
    GridFunction C_Scan;   // m x d
    GridFunction C_Sstar;  // m x d, adjoint flow basis
    GridFunction C_Ncan;   // m x (m-d), aligned orthonormal
    GridFunction Pi_can;   // m x m
    GridFunction G;        // d x m
    std::vector<double> condition_M;  // per node condition of [C_Scan C_Ncan]
};

/// The pair {-E^T, F^T - (E')^T} with the symbolic derivative of E.
CoefficientPair adjoint_pair(const CoefficientPair& pair);

/// N_can(t) as the aligned orthonormal nullspace of C_*(t)^T E(t), where
/// C_* is the flow basis of the already-reduced adjoint pair. Throws
/// AdjointNotRegularError when the adjoint characteristics disagree with
/// the original ones.
GridFunction n_can_via_adjoint(const CoefficientPair& pair, const ReductionChain& chain,
                               const ReductionChain& adjoint_chain,
                               double tol = kRankTol);

/// Pi_can(t) = M diag(I_d, 0) M^{-1} with M = [C_Scan C_Ncan]; errors with
/// ComplementError at the first node where M is numerically singular
/// (condition above 1e12).
GridFunction canonical_projector(const GridFunction& C_Scan, const GridFunction& C_Ncan,
                                 std::vector<double>* condition_log = nullptr);

CanonicalFrame canonical_frame(const CoefficientPair& pair, const ReductionChain& chain,
                               const ReductionChain& adjoint_chain,
                               double tol = kRankTol);

/// Convenience: runs both reductions on the same grid.
CanonicalFrame canonical_frame(const CoefficientPair& pair, int grid_n = 129,
                               double tol = kRankTol);

/// G_a = C_*(a)^T E(a), full row rank d with ker G_a = N_can(a).
Matrix ic_matrix(const CanonicalFrame& frame, double a);

/// Cross-checks the three equivalent accurate-IC formulations by
/// constructing the initial flow value from each: the projector condition,
/// N_can membership, and the G-matrix condition.
struct ICEquivalenceReport {
    Vector x_from_projector;
    Vector x_from_membership;
    Vector x_from_gmatrix;
    double max_discrepancy = 0.0;
};

ICEquivalenceReport check_accurate_conditions_equivalence(const CanonicalFrame& frame,
                                                          double a, const Vector& x_a);

}  // namespace dae
