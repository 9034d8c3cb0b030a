#pragma once

#include "daecanon/expr.hpp"
#include "daecanon/trajectory.hpp"

namespace dae {

/// Quasi-Weierstrass data of a regular constant pair {E, F}: nonsingular
/// T, S with S*E*T = diag(I_d, N), S*F*T = diag(W, I_{m-d}), N nilpotent of
/// index mu, plus the spectral projector and canonical subspaces.
struct PencilForm {
    int m = 0;
    int d = 0;    // dynamical degree: size of the W block
    int mu = 0;   // Kronecker index: nilpotency index of N (0 when d == m)
    Matrix T, S;
    Matrix W_block;   // d x d
    Matrix N_block;   // (m-d) x (m-d)
    Matrix Pi_can;    // spectral projector onto S_can along N_can
    SubspaceBasis S_can, N_can;
    double cond_T = 1.0;  // condition of [E V* | F W*] reported for diagnostics
};

/// det(lambda E + F) not identically zero, decided by probing the m+1
/// half-integer values lambda_k = k + 1/2 (a degree <= m polynomial that
/// vanishes at m+1 points is zero).
bool is_regular_pencil(const Matrix& E, const Matrix& F, double tol_rel = kRankTol);

/// Wong sequences V_0 = R^m, V_{k+1} = {z : Fz in E V_k} and W_0 = {0},
/// W_{k+1} = {z : Ez in F W_k}, run to stationarity. For a regular pair the
/// limits are complementary; otherwise NotRegularError.
std::pair<SubspaceBasis, SubspaceBasis> wong_sequences(const Matrix& E, const Matrix& F,
                                                       double tol_rel = kRankTol);

PencilForm quasi_weierstrass(const Matrix& E, const Matrix& F, double tol_rel = kRankTol);

/// theta_i = number of Jordan blocks of order >= i + 2 in the nilpotent
/// block, from the rank sequence of its powers; entries i = 0..mu-2.
std::vector<int> jordan_block_counts(const PencilForm& form, double tol_rel = kRankTol);
std::vector<int> jordan_block_counts(const Matrix& E, const Matrix& F,
                                     double tol_rel = kRankTol);

/// Solve E x' + F x = q(t), Pi_can x(a) = Pi_can x_a on [a, t1] with n grid
/// nodes. q must be symbolically differentiable mu-1 times (always true for
/// ExprMatrix columns). The v-part uses the finite nilpotent sum with exact
/// symbolic derivatives; the u-part uses the matrix exponential with
/// composite-Simpson convolution.
Trajectory solve_constant_ivp(const Matrix& E, const Matrix& F, const ExprMatrix& q,
                              const Vector& x_a, double a, double t1, int n,
                              const Params& params = {}, double tol_rel = kRankTol);

}  // namespace dae
