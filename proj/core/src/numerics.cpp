#include "stbclab/numerics.hpp"

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

namespace stbclab::numerics {

namespace {

void require_finite(const CMatrix& M, const char* who) {
    if (!M.allFinite())
        throw Error(std::string(who) + ": non-finite matrix entries");
}

} // namespace

double rank_ratio(const CMatrix& M) {
    if (M.cols() == 0 || M.rows() == 0)
        return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(M);
    const auto& s = svd.singularValues();
    double smax = s(0);
    if (smax <= 0.0)
        return 0.0;
    return s(s.size() - 1) / smax;
}

bool has_full_column_rank(const CMatrix& M, double tol) {
    if (M.cols() == 0)
        return true; // vacuously: nothing to be dependent
    if (M.rows() < M.cols())
        return false;
    return rank_ratio(M) > tol;
}

CMatrix column_space_projector(const CMatrix& M, double tol) {
    require_finite(M, "column_space_projector");
    const Eigen::Index m = M.rows();
    if (M.cols() == 0)
        return CMatrix::Zero(m, m);
    if (!has_full_column_rank(M, tol))
        throw RankDeficient("column_space_projector: rank-deficient input");
    // Q = M X with (M^H M) X = M^H
    CMatrix gram = M.adjoint() * M;
    CMatrix X = gram.ldlt().solve(M.adjoint());
    return M * X;
}

CMatrix complement_projector(const CMatrix& M, double tol) {
    const Eigen::Index m = M.rows();
    if (M.cols() == 0)
        return CMatrix::Identity(m, m);
    return CMatrix::Identity(m, m) - column_space_projector(M, tol);
}

CMatrix complement_projector_svd(const CMatrix& M, double tol) {
    require_finite(M, "complement_projector_svd");
    const Eigen::Index m = M.rows();
    if (M.cols() == 0)
        return CMatrix::Identity(m, m);
    Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > tol * smax)
        ++r;
    if (r == 0)
        return CMatrix::Identity(m, m);
    CMatrix U = svd.matrixU().leftCols(r);
    return CMatrix::Identity(m, m) - U * U.adjoint();
}

CMatrix pseudo_inverse(const CMatrix& G, double tol) {
    require_finite(G, "pseudo_inverse");
    if (G.cols() > G.rows() || !has_full_column_rank(G, tol))
        throw RankDeficient("pseudo_inverse: input lacks full column rank");
    CMatrix gram = G.adjoint() * G;
    return gram.ldlt().solve(G.adjoint());
}

CMatrix inverse_sqrt_hermitian(const CMatrix& K, double tol) {
    require_finite(K, "inverse_sqrt_hermitian");
    if (K.rows() != K.cols())
        throw Error("inverse_sqrt_hermitian: matrix not square");
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(K);
    if (eig.info() != Eigen::Success)
        throw Error("inverse_sqrt_hermitian: eigendecomposition failed");
    const auto& lam = eig.eigenvalues();
    const double lmax = lam(lam.size() - 1);
    if (lam(0) <= tol * std::max(lmax, 1.0))
        throw NotPositiveDefinite("inverse_sqrt_hermitian: eigenvalue at or below tolerance");
    RVector inv_sqrt = lam.array().rsqrt();
    CMatrix S = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().adjoint();
    // symmetrize away the last rounding bits so S is Hermitian to machine precision
    return 0.5 * (S + CMatrix(S.adjoint()));
}

} // namespace stbclab::numerics
