#include "sympfact/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "eigen_support.hpp"

namespace sympfact {

namespace detail {

Mat solve_left(const Mat& a, const Mat& b) {
    if (!a.square() || a.rows() != b.rows())
        throw std::invalid_argument("solve_left: dimension mismatch");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(to_eigen(a));
    if (lu.rcond() < std::numeric_limits<double>::epsilon())
        throw std::runtime_error("solve_left: matrix is numerically singular");
    return from_eigen(lu.solve(to_eigen(b)));
}

Mat solve_right(const Mat& b, const Mat& a) {
    return transpose(solve_left(transpose(a), transpose(b)));
}

Mat inverse(const Mat& a) { return solve_left(a, Mat::identity(a.rows())); }

}  // namespace detail

double default_rank_tol(const Mat& a) {
    return 1e-10 * static_cast<double>(std::max(a.rows(), a.cols()));
}

RankFactorization rank_factor(const Mat& a, double tol) {
    if (a.empty()) throw std::invalid_argument("rank_factor: matrix must be non-empty");
    if (!a.square()) throw std::invalid_argument("rank_factor: matrix must be square");
    if (!(tol > 0.0)) throw std::invalid_argument("rank_factor: tol must be positive");

    const std::size_t d = a.rows();
    if (max_abs(a) == 0.0) {
        // Exactly zero input: rank 0 with the identity convention p = q = I.
        return RankFactorization{0, Mat::identity(d), Mat::identity(d)};
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(a),
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double smax = sigma(0);

    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > tol * smax) ++r;

    // p = U * diag(sigma_1..sigma_r, 1, ..., 1), q = V^T; both nonsingular,
    // and p * diag(I_r, 0) * q recovers the dominant part of a.
    Eigen::MatrixXd p = svd.matrixU();
    for (std::size_t j = 0; j < r; ++j) p.col(static_cast<Eigen::Index>(j)) *= sigma(static_cast<Eigen::Index>(j));
    return RankFactorization{r, detail::from_eigen(p), detail::from_eigen(svd.matrixV().transpose())};
}

RankFactorization rank_factor(const Mat& a) { return rank_factor(a, default_rank_tol(a)); }

Mat spd_sqrt(const Mat& p) {
    if (!p.square() || p.empty()) throw std::invalid_argument("spd_sqrt: matrix must be square and non-empty");
    const double nrm = frobenius_norm(p);
    if (symmetry_residual(p) > 1e-10 * (1.0 + nrm))
        throw std::invalid_argument("spd_sqrt: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::to_eigen(symmetrize(p)));
    if (es.info() != Eigen::Success) throw std::runtime_error("spd_sqrt: eigendecomposition failed");

    Eigen::VectorXd lambda = es.eigenvalues();
    const double lmax = lambda.maxCoeff();
    if (!(lmax > 0.0)) throw std::invalid_argument("spd_sqrt: matrix is not positive definite");
    const double floor = 1e3 * std::numeric_limits<double>::epsilon() * lmax;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) < -1e-8 * lmax)
            throw std::invalid_argument("spd_sqrt: matrix has a negative eigenvalue beyond tolerance");
        lambda(i) = std::max(lambda(i), floor);
    }

    Eigen::MatrixXd r = es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    return symmetrize(detail::from_eigen(r));
}

namespace {

// Index maps for the symmetric (i >= j) and strict lower (i > j) triangles.
std::size_t sym_dim(std::size_t d) { return d * (d + 1) / 2; }
std::size_t skew_dim(std::size_t d) { return d * (d - 1) / 2; }

Mat sym_basis_element(std::size_t d, std::size_t i, std::size_t j) {
    Mat e(d, d);
    e(i, j) = 1.0;
    e(j, i) = 1.0;
    return e;
}

}  // namespace

SymmetricPairFactors two_symmetric_factor(const Mat& p, std::uint64_t seed) {
    if (!p.square() || p.empty()) throw std::invalid_argument("two_symmetric_factor: matrix must be square and non-empty");
    const std::size_t d = p.rows();
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> psvd(detail::to_eigen(p));
        const auto& sigma = psvd.singularValues();
        if (!(sigma(sigma.size() - 1) > default_rank_tol(p) * sigma(0)))
            throw std::invalid_argument("two_symmetric_factor: singular input");
    }

    // Matrix of the intertwining map K -> p K - K p^T over symmetric K,
    // expressed skew-triangle-by-symmetric-triangle. Its null space always has
    // dimension >= d and contains nonsingular elements.
    const std::size_t m = skew_dim(d);
    const std::size_t n = sym_dim(d);
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(std::max<std::size_t>(m, 1)),
                                               static_cast<Eigen::Index>(n));
    std::size_t col = 0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j, ++col) {
            const Mat e = sym_basis_element(d, i, j);
            const Mat t = p * e - e * transpose(p);
            std::size_t row = 0;
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c = 0; c < r; ++c, ++row)
                    op(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = t(r, c);
        }
    }

    // Null-space basis: the trailing right singular vectors. The operator
    // matrix grows like d^2 x d^2, so use the divide-and-conquer SVD (it
    // falls back to Jacobi below its internal size threshold).
    Eigen::BDCSVD<Eigen::MatrixXd> svd(op, Eigen::ComputeFullV);
    std::size_t rank = 0;
    if (m > 0) {
        const auto& sigma = svd.singularValues();
        const double top = sigma.size() > 0 ? sigma(0) : 0.0;
        if (top > 0.0) {
            const double cut = 1e-10 * static_cast<double>(std::max(m, n)) * top;
            for (Eigen::Index i = 0; i < sigma.size(); ++i)
                if (sigma(i) > cut) ++rank;
        }
    }
    const std::size_t null_dim = n - rank;
    if (null_dim == 0) throw std::runtime_error("two_symmetric_factor: intertwining map has no null space");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    constexpr int kMaxDraws = 32;
    constexpr double kMinSigma = 1e-4;  // against unit Frobenius norm

    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        Eigen::VectorXd coeffs(static_cast<Eigen::Index>(null_dim));
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) = gauss(rng);
        Eigen::VectorXd v = svd.matrixV().rightCols(static_cast<Eigen::Index>(null_dim)) * coeffs;

        Mat k(d, d);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j <= i; ++j, ++idx) {
                k(i, j) = v(static_cast<Eigen::Index>(idx));
                k(j, i) = v(static_cast<Eigen::Index>(idx));
            }
        const double knorm = frobenius_norm(k);
        if (knorm == 0.0) continue;
        k = (1.0 / knorm) * k;
        if (min_singular_value(k) < kMinSigma) continue;

        SymmetricPairFactors out;
        out.s1 = symmetrize(p * k);
        out.s2 = symmetrize(detail::inverse(k));
        return out;
    }
    throw std::runtime_error("two_symmetric_factor: no well-conditioned symmetric factor found after 32 draws");
}

double min_singular_value(const Mat& a) {
    if (a.empty()) throw std::invalid_argument("min_singular_value: matrix must be non-empty");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(a));
    const auto& sigma = svd.singularValues();
    return sigma(sigma.size() - 1);
}

double determinant(const Mat& a) {
    if (!a.square() || a.empty()) throw std::invalid_argument("determinant: matrix must be square and non-empty");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(detail::to_eigen(a));
    return lu.determinant();
}

}  // namespace sympfact
