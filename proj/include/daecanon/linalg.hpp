#pragma once

#include <Eigen/Dense>

#include "daecanon/errors.hpp"

namespace dae {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default relative SVD rank tolerance. Singular values below
/// tol_rel * sigma_max * max(rows, cols) are treated as zero.
inline constexpr double kRankTol = 1e-9;

/// Floor for rank decisions about derived subspaces (kernels of reduced
/// coefficients, intersection dimensions): those matrices carry the O(h^4)
/// error of the grid derivatives, so deciding them at kRankTol would read
/// noise as rank. Exact-product ranks keep the strict tolerance.
inline constexpr double kSubspaceTol = 1e-6;

inline double subspace_decision_tol(double tol_rel) {
    return tol_rel > kSubspaceTol ? tol_rel : kSubspaceTol;
}

double spectral_norm(const Matrix& m);

/// Numerical rank by singular value thresholding. A singular value counts
/// when sigma > tol_rel * sigma_max * max(rows, cols); the rank of a matrix
/// with sigma_max == 0 is zero. `anchor` supplies an absolute scale floor:
/// the threshold uses max(sigma_max, anchor). With anchor = 0 the test is
/// purely relative.
int rank_of(const Matrix& m, double tol_rel = kRankTol, double anchor = 0.0);

/// Orthonormal columns. `dim() == 0` bases are legal and represent {0}.
struct SubspaceBasis {
    Matrix columns;

    SubspaceBasis() = default;
    explicit SubspaceBasis(Matrix cols) : columns(std::move(cols)) {}

    int ambient() const { return static_cast<int>(columns.rows()); }
    int dim() const { return static_cast<int>(columns.cols()); }
};

SubspaceBasis onb_range(const Matrix& m, double tol_rel = kRankTol, double anchor = 0.0);
SubspaceBasis onb_nullspace(const Matrix& m, double tol_rel = kRankTol, double anchor = 0.0);
SubspaceBasis onb_corange(const Matrix& m, double tol_rel = kRankTol, double anchor = 0.0);

/// Moore-Penrose pseudoinverse via SVD.
Matrix pinv(const Matrix& m, double tol_rel = kRankTol);

struct ProjectorMatrix {
    Matrix P;
    double condition = 1.0;  // condition of the stacked basis matrix

    int dim() const { return static_cast<int>(P.rows()); }
};

/// Oblique projector with im P = span(im_basis) and ker P = span(along_basis).
/// Throws ComplementError when the stacked matrix [im along] is rank
/// deficient at the tolerance.
ProjectorMatrix projector_onto(const SubspaceBasis& im_basis,
                               const SubspaceBasis& along_basis,
                               double tol_rel = kRankTol);

/// Orthoprojector onto the span of an orthonormal basis.
Matrix orthoprojector(const SubspaceBasis& basis);

SubspaceBasis subspace_intersect(const SubspaceBasis& u, const SubspaceBasis& v,
                                 double tol_rel = kRankTol);

/// ||P_U - P_V||_2 with orthoprojectors; zero exactly for equal subspaces.
double subspace_gap(const SubspaceBasis& u, const SubspaceBasis& v);

/// Residual of V-membership: max over columns w of U of ||(I - P_V) w|| /
/// ||w||. Zero when span U is contained in span V.
double inclusion_residual(const Matrix& u, const SubspaceBasis& v);

/// Orthogonal Procrustes alignment: returns candidate * Q with the
/// orthogonal Q minimizing ||candidate * Q - previous||_F. The span is
/// unchanged; successive calls along a grid yield a continuous basis.
Matrix align_to(const Matrix& previous, const SubspaceBasis& candidate);

/// Orthonormalize the columns of m (thin basis of its range, column order
/// roughly preserved via Householder QR with pivoting fallback to SVD).
SubspaceBasis orthonormalize(const Matrix& m, double tol_rel = kRankTol);

/// Idempotency defect ||P*P - P||_F.
double projector_residual(const Matrix& p);

/// Matrix exponential, scaling-and-squaring with Pade(13).
Matrix expm(const Matrix& a);

double condition_number(const Matrix& m);

}  // namespace dae
