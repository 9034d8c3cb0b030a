#pragma once

#include <optional>

#include "daecanon/problem.hpp"

namespace dae {

/// E = A D with ker A + im D = R^m (direct). Realized with A = E and
/// D = R = D^- = P0, the orthoprojector onto (ker E)^perp.
struct ProperFactorization {
    GridFunction A, D, R, D_minus;
};

ProperFactorization proper_factorization(const GridFunction& E, double tol = kRankTol,
                                         double anchor = 0.0);

/// How the admissible projectors Q_i are chosen beyond level 0.
///  - PaperTerminal: widely-orthogonal complements while ker G_i meets the
///    associated subspace S_i = {z : B_0 z in im G_i}; at the terminal level
///    (trivial intersection) Q_i projects along S_i itself.
///  - WidelyOrthogonal: the orthogonal complement construction at every
///    level. The kernels of the resulting Pi chains agree; the projectors
///    themselves differ.
enum class ProjectorPolicy { PaperTerminal, WidelyOrthogonal };

struct AdmissibleLevel {
    GridFunction G, B;
    std::optional<GridFunction> Q, P, Pi;
    int r_T = -1;      // rank G_i (constant across nodes)
    int n_dim = 0;     // dim N_i = ker G_i
    int n_hat_dim = 0; // dim (N_0+..+N_{i-1}) cap N_i (zero for regular DAEs)
    int theta_hat = 0; // dim (N_i cap S_i)
};

struct AdmissibleSequence {
    int m = 0;
    int mu_T = -1;
    bool regular = false;
    std::vector<AdmissibleLevel> levels;  // i = 0..mu_T
    GridFunction n_can_basis;             // aligned onb of ker Pi_{mu-1}, m x (m-d)
    ProjectorPolicy policy = ProjectorPolicy::PaperTerminal;

    std::vector<int> r_T_list() const;
};

AdmissibleSequence admissible_sequence(const GridFunction& E, const GridFunction& F,
                                       double tol = kRankTol, int level_cap = -1,
                                       ProjectorPolicy policy = ProjectorPolicy::PaperTerminal);

AdmissibleSequence admissible_sequence(const CoefficientPair& pair, int grid_n = 129,
                                       double tol = kRankTol, int level_cap = -1,
                                       ProjectorPolicy policy = ProjectorPolicy::PaperTerminal);

/// Aligned orthonormal basis of ker Pi_{mu-1}(t) = N_can(t).
GridFunction n_can_via_tractability(const AdmissibleSequence& seq);

}  // namespace dae
