#pragma once

#include <optional>

#include "daecanon/problem.hpp"

namespace dae {

enum class VerdictKind { Regular, NotPreRegular, RankDrift };

std::string to_string(VerdictKind v);

/// Witness data for the three pre-regularity conditions on one level:
/// constant rank E, full row rank [E F], constant dim(ker E cap S).
struct PreRegularityReport {
    bool ok = false;
    bool drift = false;       // rank or intersection dimension varies across nodes
    bool full_row_rank = true;
    int r = -1;
    int theta = -1;
    std::vector<int> rank_E;          // per node
    std::vector<int> rank_EF;         // per node
    std::vector<int> theta_nodes;     // per node
    std::vector<double> min_sigma_EF; // per node
    std::vector<int> failure_nodes;
    std::string message;
};

struct ReductionLevel {
    int m_j = 0;
    GridFunction E, F;
    int r = -1;
    int theta = -1;
    PreRegularityReport prereg;
    // Bases exist on levels where a reduction step was taken.
    std::optional<GridFunction> Y, Z, C, Cdot;
    double min_sigma_E = 0.0;  // terminal level: smallest singular value of E_mu
};

/// The full reduction record: levels 0..mu-1 plus, when the flow is
/// nontrivial, the terminal level mu carrying the nonsingular inherent pair.
struct ReductionChain {
    VerdictKind verdict = VerdictKind::NotPreRegular;
    int failed_level = -1;
    int m = 0;
    int mu = -1;
    int d = -1;          // r_{mu-1}; m for index zero; 0 for zero flow
    bool zero_flow = false;
    double tol = kRankTol;
    double anchor = 0.0;  // scale of the level-0 pair used as rank floor
    std::vector<ReductionLevel> levels;

    bool regular() const { return verdict == VerdictKind::Regular; }
    std::vector<int> r_list() const;      // r_0..r_{mu-1}
    std::vector<int> theta_list() const;  // theta_0..theta_{mu-1}
    const ReductionLevel& terminal() const;  // level mu (inherent ODE)
};

PreRegularityReport pre_regularity(const GridFunction& E, const GridFunction& F,
                                   double tol, double anchor);
PreRegularityReport pre_regularity(const GridFunction& E, const GridFunction& F,
                                   double tol_rank, double tol_sub, double anchor);
PreRegularityReport pre_regularity(const CoefficientPair& pair, int grid_n = 129,
                                   double tol = kRankTol);

/// One reduction step: continuity-aligned bases Y (im E), Z ((im E)^perp),
/// C (ker Z^T F), then E' = Y^T E C and F' = Y^T (F C + E C') with C' by
/// grid differences. Stores the bases on `level` and returns the next pair.
std::pair<GridFunction, GridFunction> reduce_once(ReductionLevel& level, double tol,
                                                  double anchor);

ReductionChain reduce_full(const CoefficientPair& pair, int grid_n = 129,
                           double tol = kRankTol);
ReductionChain reduce_full(GridFunction E0, GridFunction F0, double tol = kRankTol);

/// Basis of S_can: the product C_0 C_1 ... C_{mu-1} (identity for index
/// zero), m x d with full column rank at every node. Throws ZeroFlowError
/// when d = 0.
GridFunction s_can_basis(const ReductionChain& chain);

struct SubspaceChainEntry {
    GridFunction basis;              // aligned orthonormal basis of S^[j]
    int dim = 0;                     // r_j
    std::vector<int> intersect_dims; // per node dim(S^[j] cap ker E)
};

/// Nested subspaces S^[0] superset ... superset S^[mu-1] in the ambient
/// space, with the intersection dimensions dim(S^[j] cap ker E) = theta_j.
std::vector<SubspaceChainEntry> subspace_chain(const ReductionChain& chain);

/// Equivalence transform {LEK, LFK + LEK'} with symbolic K'. L and K are
/// checked pointwise nonsingular on a verification grid.
CoefficientPair apply_equivalence(const CoefficientPair& pair, const ExprMatrix& L,
                                  const ExprMatrix& K, int check_grid_n = 33,
                                  double tol = kRankTol);

}  // namespace dae
