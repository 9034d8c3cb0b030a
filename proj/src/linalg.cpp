#include "daecanon/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace dae {

namespace {

Eigen::JacobiSVD<Matrix> svd_of(const Matrix& m, unsigned options) {
    return Eigen::JacobiSVD<Matrix>(m, options);
}

double rank_threshold(const Eigen::JacobiSVD<Matrix>& svd, int rows, int cols,
                      double tol_rel, double anchor) {
    double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    return tol_rel * std::max(smax, anchor) * std::max(rows, cols);
}

int rank_from_svd(const Eigen::JacobiSVD<Matrix>& svd, int rows, int cols,
                  double tol_rel, double anchor) {
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    double thresh = rank_threshold(svd, rows, cols, tol_rel, anchor);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++r;
    return r;
}

}  // namespace

double spectral_norm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    return svd_of(m, 0).singularValues()(0);
}

int rank_of(const Matrix& m, double tol_rel, double anchor) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    auto svd = svd_of(m, 0);
    return rank_from_svd(svd, static_cast<int>(m.rows()), static_cast<int>(m.cols()),
                         tol_rel, anchor);
}

SubspaceBasis onb_range(const Matrix& m, double tol_rel, double anchor) {
    if (m.rows() == 0 || m.cols() == 0) return SubspaceBasis(Matrix(m.rows(), 0));
    auto svd = svd_of(m, Eigen::ComputeThinU);
    int r = rank_from_svd(svd, static_cast<int>(m.rows()), static_cast<int>(m.cols()),
                          tol_rel, anchor);
    return SubspaceBasis(svd.matrixU().leftCols(r));
}

SubspaceBasis onb_nullspace(const Matrix& m, double tol_rel, double anchor) {
    if (m.cols() == 0) return SubspaceBasis(Matrix(0, 0));
    if (m.rows() == 0) return SubspaceBasis(Matrix::Identity(m.cols(), m.cols()));
    auto svd = svd_of(m, Eigen::ComputeFullV);
    int r = rank_from_svd(svd, static_cast<int>(m.rows()), static_cast<int>(m.cols()),
                          tol_rel, anchor);
    return SubspaceBasis(svd.matrixV().rightCols(m.cols() - r));
}

SubspaceBasis onb_corange(const Matrix& m, double tol_rel, double anchor) {
    if (m.rows() == 0) return SubspaceBasis(Matrix(0, 0));
    if (m.cols() == 0) return SubspaceBasis(Matrix::Identity(m.rows(), m.rows()));
    auto svd = svd_of(m, Eigen::ComputeFullU);
    int r = rank_from_svd(svd, static_cast<int>(m.rows()), static_cast<int>(m.cols()),
                          tol_rel, anchor);
    return SubspaceBasis(svd.matrixU().rightCols(m.rows() - r));
}

Matrix pinv(const Matrix& m, double tol_rel) {
    if (m.rows() == 0 || m.cols() == 0) return Matrix(m.cols(), m.rows());
    auto svd = svd_of(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double thresh = rank_threshold(svd, static_cast<int>(m.rows()),
                                   static_cast<int>(m.cols()), tol_rel, 0.0);
    Vector inv = Vector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

ProjectorMatrix projector_onto(const SubspaceBasis& im_basis,
                               const SubspaceBasis& along_basis, double tol_rel) {
    const int n = im_basis.ambient();
    if (along_basis.dim() > 0 && along_basis.ambient() != n)
        throw ComplementError("projector_onto: ambient dimension mismatch");
    const int d = im_basis.dim();
    const int c = along_basis.dim();
    if (d + c != n)
        throw ComplementError("projector_onto: dimensions do not sum to ambient");

    Matrix stacked(n, n);
    if (d > 0) stacked.leftCols(d) = im_basis.columns;
    if (c > 0) stacked.rightCols(c) = along_basis.columns;

    auto svd = svd_of(stacked, 0);
    const auto& sv = svd.singularValues();
    double smin = sv(sv.size() - 1), smax = sv(0);
    if (smin <= tol_rel * smax * n)
        throw ComplementError("projector_onto: stacked basis is rank deficient");

    Matrix target = Matrix::Zero(n, n);
    if (d > 0) target.leftCols(d) = im_basis.columns;
    ProjectorMatrix out;
    out.P = stacked.transpose().fullPivLu().solve(target.transpose()).transpose();
    out.condition = smax / smin;
    return out;
}

Matrix orthoprojector(const SubspaceBasis& basis) {
    if (basis.dim() == 0) return Matrix::Zero(basis.ambient(), basis.ambient());
    return basis.columns * basis.columns.transpose();
}

SubspaceBasis subspace_intersect(const SubspaceBasis& u, const SubspaceBasis& v,
                                 double tol_rel) {
    const int n = u.ambient();
    if (u.dim() == 0 || v.dim() == 0) return SubspaceBasis(Matrix(n, 0));
    // z lies in U cap V iff both orthoprojector complements annihilate it.
    // The stack has natural scale 1, so anchor the rank decision there:
    // otherwise U == V == R^n leaves a numerically-zero stack whose
    // relative threshold sees phantom rank.
    Matrix stacked(2 * n, n);
    stacked.topRows(n) = Matrix::Identity(n, n) - orthoprojector(u);
    stacked.bottomRows(n) = Matrix::Identity(n, n) - orthoprojector(v);
    return onb_nullspace(stacked, tol_rel, 1.0);
}

double subspace_gap(const SubspaceBasis& u, const SubspaceBasis& v) {
    return spectral_norm(orthoprojector(u) - orthoprojector(v));
}

double inclusion_residual(const Matrix& u, const SubspaceBasis& v) {
    if (u.cols() == 0) return 0.0;
    Matrix rem = u - orthoprojector(v) * u;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        double den = u.col(j).norm();
        if (den > 0.0) worst = std::max(worst, rem.col(j).norm() / den);
    }
    return worst;
}

Matrix align_to(const Matrix& previous, const SubspaceBasis& candidate) {
    if (candidate.dim() == 0) return candidate.columns;
    Matrix cross = candidate.columns.transpose() * previous;
    auto svd = svd_of(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix q = svd.matrixU() * svd.matrixV().transpose();
    return candidate.columns * q;
}

SubspaceBasis orthonormalize(const Matrix& m, double tol_rel) {
    return onb_range(m, tol_rel);
}

double projector_residual(const Matrix& p) {
    return (p * p - p).norm();
}

Matrix expm(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return a;
    // Pade(13) coefficients.
    static const double b[] = {64764752532480000.0, 32382376266240000.0,
                               7771770303897600.0,  1187353796428800.0,
                               129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,
                               1323241920.0,        40840800.0,
                               960960.0,            16380.0,
                               182.0,               1.0};
    double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    Matrix as = a;
    const double theta13 = 5.371920351148152;
    if (nrm > theta13) {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
        as /= std::ldexp(1.0, squarings);
    }
    Matrix a2 = as * as;
    Matrix a4 = a2 * a2;
    Matrix a6 = a2 * a4;
    Matrix id = Matrix::Identity(n, n);
    Matrix u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                     b[5] * a4 + b[3] * a2 + b[1] * id);
    Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
               b[2] * a2 + b[0] * id;
    Matrix f = (v - u).fullPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) f = f * f;
    return f;
}

double condition_number(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 1.0;
    auto sv = svd_of(m, 0).singularValues();
    double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

}  // namespace dae
