#pragma once

#include "daecanon/canonical.hpp"
#include "daecanon/trajectory.hpp"

namespace dae {

/// Homogeneous IVP with the accurately stated condition G_a(x(a) - x_a) = 0:
/// solves (G_a C(a)) xi_a = G_a x_a, integrates the inherent ODE
/// xi' = -E_mu(t)^{-1} F_mu(t) xi with classic RK4 on the master grid
/// (midpoint coefficients by cubic interpolation), and returns x = C xi.
/// `a` must be a grid node. d = 0 yields the zero trajectory.
Trajectory solve_homogeneous(const CoefficientPair& pair, const ReductionChain& chain,
                             const CanonicalFrame& frame, double a, const Vector& x_a);

/// Same flow, but the initial condition is stated with an arbitrary matrix
/// G_ic (s x m, s >= d). Used both for accurate conditions and for
/// demonstrating inaccurate ones.
Trajectory solve_homogeneous_ic(const CoefficientPair& pair, const ReductionChain& chain,
                                const Matrix& G_ic, double a, const Vector& x_a);

/// Maximal fundamental matrix: X(t) = C(t) Phi(t) C(a)^+ Pi_can(a) with
/// Phi the reduced fundamental matrix, so E X' + F X = 0, X(a) = Pi_can(a).
GridFunction maximal_fundamental(const CoefficientPair& pair, const ReductionChain& chain,
                                 const CanonicalFrame& frame, double a);

/// Closed-form semi-explicit index-1 solution: E = diag(I_r, 0) and F given
/// as an m x m expression matrix with F22 pointwise nonsingular. U solves
/// U' + (F11 - F12 F22^{-1} F21) U = 0, U(a) = I (RK4 on a half-step grid);
/// f accumulates by composite Simpson; x2 = F22^{-1}(q2 - F21 x1).
Trajectory solve_semiexplicit_index1(const ExprMatrix& F, int r, const ExprMatrix& q,
                                     double t0, double t1, int n, const Params& params,
                                     double a, const Vector& x_a1);

struct PerturbationStudy {
    std::vector<double> eps;
    std::vector<double> K_hat;     // one per eps level
    double max_rel_spread = 0.0;   // max |K_i - K_j| / max K
    bool finite = true;
};

/// Empirical accurate-IC constant: perturbs gamma within im G_a at the
/// given magnitudes and records K_hat = max_t |x - x*| / |dgamma|. The flow
/// is linear, so K_hat should be eps-independent up to solver error.
PerturbationStudy perturbation_study(const CoefficientPair& pair,
                                     const ReductionChain& chain,
                                     const CanonicalFrame& frame, double a,
                                     const Vector& x_a, int n_samples,
                                     const std::vector<double>& eps_levels,
                                     std::uint64_t seed = 1);

}  // namespace dae
