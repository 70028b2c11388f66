#pragma once

#include <cstdint>

#include "sympfact/mat.hpp"

namespace sympfact {

// a = p * diag(I_r, 0) * q with p, q nonsingular. p carries the leading r
// singular values; q is orthogonal.
struct RankFactorization {
    std::size_t rank = 0;
    Mat p;
    Mat q;
};

// Relative numerical-rank threshold: singular values sigma_i are counted when
// sigma_i > tol * sigma_max.
double default_rank_tol(const Mat& a);

RankFactorization rank_factor(const Mat& a, double tol);
RankFactorization rank_factor(const Mat& a);

// Symmetric square root of a symmetric positive definite matrix. Eigenvalues
// below 1e3 * machine-epsilon * lambda_max are clamped to that floor so inputs
// that accumulated roundoff through products still pass; eigenvalues negative
// beyond -1e-8 * lambda_max are rejected.
Mat spd_sqrt(const Mat& p);

struct SymmetricPairFactors {
    Mat s1;
    Mat s2;
};

// Default seed for the randomized null-space draw inside two_symmetric_factor.
inline constexpr std::uint64_t kTwoSymmetricSeed = 0x53594d50u;

// Writes a nonsingular p as a product of two symmetric matrices s1 * s2.
// A symmetric K with p K = K p^T and K nonsingular is drawn from the null
// space of the intertwining map (a seeded random combination, retried up to
// 32 times until sigma_min(K) clears 1e-4 after unit-norm scaling); then
// s1 = p K and s2 = K^{-1}.
SymmetricPairFactors two_symmetric_factor(const Mat& p, std::uint64_t seed = kTwoSymmetricSeed);

double min_singular_value(const Mat& a);

// Determinant via partial-pivot LU.
double determinant(const Mat& a);

}  // namespace sympfact
