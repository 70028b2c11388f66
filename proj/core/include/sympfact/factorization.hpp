#pragma once

#include "sympfact/kernel.hpp"
#include "sympfact/mat.hpp"
#include "sympfact/symplectic.hpp"

namespace sympfact {

// Block LDU arrangements of a symplectic H with nonsingular left upper block:
//   DiagLeft:   H = Diag(A1) * Lower(A1^T A2) * Upper(A1^{-1} B1)
//   DiagCenter: H = Lower(A2 A1^{-1}) * Diag(A1) * Upper(A1^{-1} B1)
//   DiagRight:  H = Lower(A2 A1^{-1}) * Upper(B1 A1^T) * Diag(A1)
enum class LduVariant { DiagLeft, DiagCenter, DiagRight };

FactorChain ldu_factor(const Mat& h, LduVariant variant);

struct ShiftResult {
    Mat s;        // symmetric; zero when the left upper block is already nonsingular
    Mat shifted;  // Upper(s)^{-1} * h, with nonsingular left upper block
};

// Builds s = -lambda * P * diag(0_r, I_{d-r}) * P^T from a rank factorization
// A1 = P * diag(I_r, 0) * Q of the left upper block, so that the shifted
// matrix has a nonsingular left upper block for every lambda != 0.
ShiftResult nonsingularizing_shift(const Mat& h, double lambda = 1.0);

// h = Upper(s) * Lower(t) * Upper(u) * Diag(p); t, u, p are uniquely
// determined by h and s.
struct UluResult {
    Mat s, t, u, p;
};

UluResult unit_ulu(const Mat& h);
FactorChain ulu_chain(const UluResult& r);

enum class Orientation { StartUpper, StartLower };

// Seven alternating unit triangular factors multiplying to Diag(p), built
// from a split p = p1 * p2 into two symmetric nonsingular factors:
//   Diag(p) = Upper(-p1) Lower(p1^{-1}-I) Upper(I) Lower(p1-I-p2^{-1})
//             Upper(p2-I) Lower(I) Upper(p2^{-1}-I)
// StartUpper places an upper factor at chain index 0; StartLower is the
// transposed arrangement.
FactorChain diagonal_to_unit_triangular(const Mat& p, Orientation orientation = Orientation::StartUpper,
                                        std::uint64_t seed = kTwoSymmetricSeed);
FactorChain diagonal_to_unit_triangular_split(const Mat& p1, const Mat& p2,
                                              Orientation orientation = Orientation::StartUpper);

// At most nine alternating unit triangular factors multiplying to h: the
// unit ULU factors with the diagonal part expanded and the two adjacent
// upper blocks merged.
FactorChain unit_triangular_9(const Mat& h);

// At most eight alternating unit triangular factors for h with nonsingular
// left upper block: Lower(S) * [seven-factor expansion of Diag(A1)] with the
// Upper(T) block merged into the rightmost factor.
FactorChain spn_factor_8(const Mat& h);

// For symmetric positive definite symplectic h: a chain L of at most four
// unit triangular factors with chain_product(L) * chain_product(L)^T = h.
FactorChain spp_factor(const Mat& h);

// Off-diagonal entries <= tol and every eigenvalue with real part > tol.
bool is_m_matrix(const Mat& a, double tol = 1e-10);

// m = Lower(h) * [[dpos, 0], [0, dpos^{-1}]] * Upper(k) with dpos positive
// diagonal, h and k symmetric entrywise nonpositive, and h * dpos * k diagonal.
struct SpmForm {
    Mat h, dpos, k;
};

SpmForm spm_factor(const Mat& m, double tol = 1e-10);
FactorChain spm_chain(const SpmForm& f);

// For a full-rank symmetric pair a (2d x d): the symplectic matrix [a, b]
// with b = -J a (a^T a)^{-1}.
Mat complete_symplectic(const Mat& a);

// Symplectic q with q e1 = u exactly, for any nonzero u (2d x 1). Greedily
// grows u into a full-rank symmetric pair using standard-basis candidates
// projected onto ker(A^T J), then completes.
Mat extend_to_symplectic_with_column(const Mat& u);

}  // namespace sympfact
