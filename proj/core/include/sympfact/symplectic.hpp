#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "sympfact/mat.hpp"

namespace sympfact {

// The skew form [[0, I], [-I, 0]] that defines the group: H is symplectic
// when H^T J H = J.
struct StandardJ {
    std::size_t d = 0;
    Mat matrix() const;
};

Mat standard_j(std::size_t d);

enum class Side { Upper, Lower };

// [[I, S], [0, I]] (Upper) or [[I, 0], [S, I]] (Lower) with S symmetric.
// The block is symmetrized on construction so s == s^T holds exactly.
struct UnitTriangularFactor {
    Side side = Side::Upper;
    Mat s;
};

// [[P, 0], [0, P^{-T}]] with P nonsingular.
struct DiagonalFactor {
    Mat p;
};

UnitTriangularFactor upper_factor(const Mat& s);
UnitTriangularFactor lower_factor(const Mat& s);
DiagonalFactor diagonal_factor(const Mat& p);

using Factor = std::variant<UnitTriangularFactor, DiagonalFactor>;

// Product chain; index 0 is the rightmost (first-applied) factor, so the
// materialized product is factors[n-1] * ... * factors[0].
struct FactorChain {
    std::size_t d = 0;
    std::vector<Factor> factors;
};

Mat materialize(const UnitTriangularFactor& f);
Mat materialize(const DiagonalFactor& f);
Mat materialize(const Factor& f);
std::size_t factor_dim(const Factor& f);

struct CheckReport {
    double residual = 0.0;           // ||H^T J H - J||_F
    double relative_residual = 0.0;  // residual / (1 + ||H||_F^2)
    bool passed = false;
    double tolerance = 0.0;
};

CheckReport symplecticity_check(const Mat& h, double tol = 1e-10);

struct Blocks {
    Mat a1, b1, a2, b2;  // H = [[A1, B1], [A2, B2]], each d x d
};

Blocks blocks(const Mat& h);
Mat assemble(const Mat& a1, const Mat& b1, const Mat& a2, const Mat& b2);

// For a 2d x k block A = [A1; A2], k <= d: whether A1^T A2 is symmetric
// (equivalently A^T J A = 0) within tol * (1 + ||a||_F^2).
bool is_symmetric_pair(const Mat& a, double tol = 1e-10);

Mat chain_product(const FactorChain& c);

// Reversed chain with every block negated (diagonal blocks inverted);
// materializes to the inverse of the original product.
FactorChain chain_inverse(const FactorChain& c);

// Reversed chain with Upper and Lower swapped (diagonal blocks transposed);
// materializes to the transpose of the original product.
FactorChain chain_transpose(const FactorChain& c);

// Moves the unique diagonal factor to the given chain index, conjugating the
// unit triangular blocks it passes so the product is unchanged:
//   Diag(P) * Upper(S) = Upper(P S P^T) * Diag(P)
//   Diag(P) * Lower(S) = Lower(P^{-T} S P^{-1}) * Diag(P)
FactorChain move_diagonal(const FactorChain& c, std::size_t position);

}  // namespace sympfact
