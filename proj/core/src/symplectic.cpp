#include "sympfact/symplectic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "eigen_support.hpp"

namespace sympfact {

Mat StandardJ::matrix() const {
    Mat j(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i) {
        j(i, d + i) = 1.0;
        j(d + i, i) = -1.0;
    }
    return j;
}

Mat standard_j(std::size_t d) { return StandardJ{d}.matrix(); }

UnitTriangularFactor upper_factor(const Mat& s) {
    if (!s.square()) throw std::invalid_argument("unit triangular block must be square");
    return UnitTriangularFactor{Side::Upper, symmetrize(s)};
}

UnitTriangularFactor lower_factor(const Mat& s) {
    if (!s.square()) throw std::invalid_argument("unit triangular block must be square");
    return UnitTriangularFactor{Side::Lower, symmetrize(s)};
}

DiagonalFactor diagonal_factor(const Mat& p) {
    if (!p.square() || p.empty()) throw std::invalid_argument("diagonal factor block must be square and non-empty");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(detail::to_eigen(p));
    if (lu.rcond() < std::numeric_limits<double>::epsilon())
        throw std::invalid_argument("diagonal factor block is singular");
    return DiagonalFactor{p};
}

Mat materialize(const UnitTriangularFactor& f) {
    const std::size_t d = f.s.rows();
    Mat m = Mat::identity(2 * d);
    if (f.side == Side::Upper) {
        set_block(m, 0, d, f.s);
    } else {
        set_block(m, d, 0, f.s);
    }
    return m;
}

Mat materialize(const DiagonalFactor& f) {
    const std::size_t d = f.p.rows();
    Mat m(2 * d, 2 * d);
    set_block(m, 0, 0, f.p);
    set_block(m, d, d, transpose(detail::inverse(f.p)));
    return m;
}

Mat materialize(const Factor& f) {
    return std::visit([](const auto& g) { return materialize(g); }, f);
}

std::size_t factor_dim(const Factor& f) {
    return std::visit([](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, UnitTriangularFactor>)
            return g.s.rows();
        else
            return g.p.rows();
    }, f);
}

CheckReport symplecticity_check(const Mat& h, double tol) {
    if (!h.square() || h.rows() % 2 != 0 || h.empty())
        throw std::invalid_argument("symplecticity_check: matrix must be square with even dimension");
    if (!(tol >= 0.0)) throw std::invalid_argument("symplecticity_check: tol must be nonnegative");
    const Mat j = standard_j(h.rows() / 2);
    const double nh = frobenius_norm(h);
    CheckReport rep;
    rep.residual = frobenius_norm(transpose(h) * j * h - j);
    rep.relative_residual = rep.residual / (1.0 + nh * nh);
    rep.tolerance = tol;
    rep.passed = rep.relative_residual <= tol;
    return rep;
}

Blocks blocks(const Mat& h) {
    if (!h.square() || h.rows() % 2 != 0 || h.empty())
        throw std::invalid_argument("blocks: matrix must be square with even dimension");
    const std::size_t d = h.rows() / 2;
    return Blocks{block(h, 0, 0, d, d), block(h, 0, d, d, d),
                  block(h, d, 0, d, d), block(h, d, d, d, d)};
}

Mat assemble(const Mat& a1, const Mat& b1, const Mat& a2, const Mat& b2) {
    if (!same_shape(a1, b1) || !same_shape(a1, a2) || !same_shape(a1, b2) || !a1.square())
        throw std::invalid_argument("assemble: blocks must be square with equal shapes");
    const std::size_t d = a1.rows();
    Mat h(2 * d, 2 * d);
    set_block(h, 0, 0, a1);
    set_block(h, 0, d, b1);
    set_block(h, d, 0, a2);
    set_block(h, d, d, b2);
    return h;
}

bool is_symmetric_pair(const Mat& a, double tol) {
    if (a.rows() % 2 != 0 || a.empty()) throw std::invalid_argument("is_symmetric_pair: row count must be even");
    const std::size_t d = a.rows() / 2;
    const std::size_t k = a.cols();
    if (k < 1 || k > d) throw std::invalid_argument("is_symmetric_pair: need 1 <= cols <= rows/2");
    const Mat a1 = block(a, 0, 0, d, k);
    const Mat a2 = block(a, d, 0, d, k);
    const Mat g = transpose(a1) * a2;
    const double na = frobenius_norm(a);
    return symmetry_residual(g) <= tol * (1.0 + na * na);
}

Mat chain_product(const FactorChain& c) {
    Mat prod = Mat::identity(2 * c.d);
    for (const Factor& f : c.factors) {
        if (factor_dim(f) != c.d) throw std::invalid_argument("chain_product: factor block size does not match chain dimension");
        prod = materialize(f) * prod;  // index 0 applies first
    }
    return prod;
}

FactorChain chain_inverse(const FactorChain& c) {
    FactorChain out;
    out.d = c.d;
    out.factors.reserve(c.factors.size());
    for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it) {
        if (const auto* u = std::get_if<UnitTriangularFactor>(&*it)) {
            out.factors.push_back(UnitTriangularFactor{u->side, -u->s});
        } else {
            const auto& dg = std::get<DiagonalFactor>(*it);
            out.factors.push_back(DiagonalFactor{detail::inverse(dg.p)});
        }
    }
    return out;
}

FactorChain chain_transpose(const FactorChain& c) {
    FactorChain out;
    out.d = c.d;
    out.factors.reserve(c.factors.size());
    for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it) {
        if (const auto* u = std::get_if<UnitTriangularFactor>(&*it)) {
            out.factors.push_back(UnitTriangularFactor{
                u->side == Side::Upper ? Side::Lower : Side::Upper, u->s});
        } else {
            const auto& dg = std::get<DiagonalFactor>(*it);
            out.factors.push_back(DiagonalFactor{transpose(dg.p)});
        }
    }
    return out;
}

FactorChain move_diagonal(const FactorChain& c, std::size_t position) {
    if (c.factors.empty()) throw std::invalid_argument("move_diagonal: chain is empty");
    if (position >= c.factors.size()) throw std::invalid_argument("move_diagonal: position out of range");

    std::size_t diag_idx = c.factors.size();
    for (std::size_t i = 0; i < c.factors.size(); ++i) {
        if (std::holds_alternative<DiagonalFactor>(c.factors[i])) {
            if (diag_idx != c.factors.size())
                throw std::invalid_argument("move_diagonal: chain must contain exactly one diagonal factor");
            diag_idx = i;
        }
    }
    if (diag_idx == c.factors.size())
        throw std::invalid_argument("move_diagonal: chain must contain exactly one diagonal factor");

    FactorChain out = c;
    // Copy rather than reference: the swaps below move the diagonal factor
    // through the vector, which would leave a reference dangling.
    const Mat p = std::get<DiagonalFactor>(out.factors[diag_idx]).p;
    const Mat pt = transpose(p);
    const Mat pinv = detail::inverse(p);
    const Mat pinv_t = transpose(pinv);

    // Moving toward higher indices passes factors standing left of the
    // diagonal in the product: Upper(S) Diag(P) = Diag(P) Upper(P^{-1} S P^{-T}),
    // Lower(S) Diag(P) = Diag(P) Lower(P^T S P).
    while (diag_idx < position) {
        auto& u = std::get<UnitTriangularFactor>(out.factors[diag_idx + 1]);
        u.s = u.side == Side::Upper ? symmetrize(pinv * u.s * pinv_t)
                                    : symmetrize(pt * u.s * p);
        std::swap(out.factors[diag_idx], out.factors[diag_idx + 1]);
        ++diag_idx;
    }
    // Moving toward lower indices passes factors standing right of the
    // diagonal: Diag(P) Upper(S) = Upper(P S P^T) Diag(P),
    // Diag(P) Lower(S) = Lower(P^{-T} S P^{-1}) Diag(P).
    while (diag_idx > position) {
        auto& u = std::get<UnitTriangularFactor>(out.factors[diag_idx - 1]);
        u.s = u.side == Side::Upper ? symmetrize(p * u.s * pt)
                                    : symmetrize(pinv_t * u.s * pinv);
        std::swap(out.factors[diag_idx], out.factors[diag_idx - 1]);
        --diag_idx;
    }
    return out;
}

}  // namespace sympfact
