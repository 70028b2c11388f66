#include "sympfact/factorization.hpp"

#include <cmath>
#include <stdexcept>

#include "eigen_support.hpp"

namespace sympfact {

namespace {

constexpr double kLeftBlockThreshold = 1e-8;  // sigma_min(A1) > threshold * sigma_max(A1)

void require_even_square(const Mat& h, const char* who) {
    if (!h.square() || h.rows() % 2 != 0 || h.empty()) {
        std::string msg = std::string(who) + ": matrix must be square with even dimension";
        throw std::invalid_argument(msg);
    }
}

bool left_block_nonsingular(const Mat& a1) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(a1));
    const auto& sigma = svd.singularValues();
    const double smax = sigma(0);
    return smax > 0.0 && sigma(sigma.size() - 1) > kLeftBlockThreshold * smax;
}

// Sanity guard: factorizations verify their own reconstruction and refuse to
// hand back grossly inconsistent output.
void guard_reconstruction(const Mat& h, const Mat& rebuilt, const char* who) {
    const double rel = frobenius_norm(rebuilt - h) / (1.0 + frobenius_norm(h));
    if (!(rel <= 1e-6)) {
        std::string msg = std::string(who) + ": reconstruction check failed (ill-conditioned input)";
        throw std::runtime_error(msg);
    }
}

}  // namespace

FactorChain ldu_factor(const Mat& h, LduVariant variant) {
    require_even_square(h, "ldu_factor");
    const Blocks b = blocks(h);
    if (!left_block_nonsingular(b.a1))
        throw std::invalid_argument("ldu_factor: singular left upper block");

    FactorChain out;
    out.d = h.rows() / 2;
    switch (variant) {
        case LduVariant::DiagLeft: {
            // Diag(A1) * Lower(A1^T A2) * Upper(A1^{-1} B1)
            const Mat s = transpose(b.a1) * b.a2;
            const Mat t = detail::solve_left(b.a1, b.b1);
            out.factors = {upper_factor(t), lower_factor(s), Factor(diagonal_factor(b.a1))};
            break;
        }
        case LduVariant::DiagCenter: {
            // Lower(A2 A1^{-1}) * Diag(A1) * Upper(A1^{-1} B1)
            const Mat s = detail::solve_right(b.a2, b.a1);
            const Mat t = detail::solve_left(b.a1, b.b1);
            out.factors = {upper_factor(t), Factor(diagonal_factor(b.a1)), lower_factor(s)};
            break;
        }
        case LduVariant::DiagRight: {
            // Lower(A2 A1^{-1}) * Upper(B1 A1^T) * Diag(A1)
            const Mat s = detail::solve_right(b.a2, b.a1);
            const Mat t = b.b1 * transpose(b.a1);
            out.factors = {Factor(diagonal_factor(b.a1)), upper_factor(t), lower_factor(s)};
            break;
        }
    }
    guard_reconstruction(h, chain_product(out), "ldu_factor");
    return out;
}

ShiftResult nonsingularizing_shift(const Mat& h, double lambda) {
    require_even_square(h, "nonsingularizing_shift");
    if (lambda == 0.0) throw std::invalid_argument("nonsingularizing_shift: lambda must be nonzero");
    const std::size_t d = h.rows() / 2;
    const Blocks b = blocks(h);

    const RankFactorization rf = rank_factor(b.a1);
    ShiftResult out;
    if (rf.rank == d) {
        out.s = Mat(d, d);
        out.shifted = h;
        return out;
    }

    // s = -lambda * P * diag(0_r, I_{d-r}) * P^T, i.e. minus the outer product
    // of the trailing d-r columns of P.
    Mat tail = block(rf.p, 0, rf.rank, d, d - rf.rank);
    out.s = symmetrize((-lambda) * (tail * transpose(tail)));

    // shifted = [[I, -s], [0, I]] * h
    out.shifted = assemble(b.a1 - out.s * b.a2, b.b1 - out.s * b.b2, b.a2, b.b2);
    return out;
}

UluResult unit_ulu(const Mat& h) {
    require_even_square(h, "unit_ulu");
    const ShiftResult shift = nonsingularizing_shift(h);
    const Blocks b = blocks(shift.shifted);
    if (!left_block_nonsingular(b.a1))
        throw std::runtime_error("unit_ulu: shift failed to produce a nonsingular left upper block");

    UluResult r;
    r.s = shift.s;
    r.t = symmetrize(detail::solve_right(b.a2, b.a1));
    r.u = symmetrize(b.b1 * transpose(b.a1));
    r.p = b.a1;
    guard_reconstruction(h, chain_product(ulu_chain(r)), "unit_ulu");
    return r;
}

FactorChain ulu_chain(const UluResult& r) {
    FactorChain c;
    c.d = r.s.rows();
    c.factors = {Factor(diagonal_factor(r.p)), upper_factor(r.u), lower_factor(r.t), upper_factor(r.s)};
    return c;
}

FactorChain diagonal_to_unit_triangular_split(const Mat& p1, const Mat& p2, Orientation orientation) {
    if (!p1.square() || !same_shape(p1, p2) || p1.empty())
        throw std::invalid_argument("diagonal_to_unit_triangular_split: blocks must be square with equal shapes");
    if (orientation == Orientation::StartLower) {
        // Diag(p)^T = Diag(p^T) and p^T = p2 * p1, so transpose the upper-start
        // arrangement of that split.
        return chain_transpose(diagonal_to_unit_triangular_split(p2, p1, Orientation::StartUpper));
    }
    const std::size_t d = p1.rows();
    const Mat eye = Mat::identity(d);
    const Mat p1inv = detail::inverse(p1);
    const Mat p2inv = detail::inverse(p2);

    // Chain index 0 is rightmost: S1..S7 with
    // S7=-p1, S6=p1^{-1}-I, S5=I, S4=p1-I-p2^{-1}, S3=p2-I, S2=I, S1=p2^{-1}-I.
    FactorChain c;
    c.d = d;
    c.factors = {upper_factor(p2inv - eye),
                 lower_factor(eye),
                 upper_factor(p2 - eye),
                 lower_factor(p1 - eye - p2inv),
                 upper_factor(eye),
                 lower_factor(p1inv - eye),
                 upper_factor(-p1)};
    return c;
}

FactorChain diagonal_to_unit_triangular(const Mat& p, Orientation orientation, std::uint64_t seed) {
    if (!p.square() || p.empty())
        throw std::invalid_argument("diagonal_to_unit_triangular: matrix must be square and non-empty");
    if (orientation == Orientation::StartLower) {
        const SymmetricPairFactors f = two_symmetric_factor(transpose(p), seed);
        return chain_transpose(diagonal_to_unit_triangular_split(f.s1, f.s2, Orientation::StartUpper));
    }
    const SymmetricPairFactors f = two_symmetric_factor(p, seed);
    return diagonal_to_unit_triangular_split(f.s1, f.s2, Orientation::StartUpper);
}

FactorChain unit_triangular_9(const Mat& h) {
    require_even_square(h, "unit_triangular_9");
    const UluResult r = unit_ulu(h);
    FactorChain c = diagonal_to_unit_triangular(r.p, Orientation::StartUpper);

    // h = Upper(s) Lower(t) Upper(u) Diag(p); the expansion's leftmost factor
    // is Upper(S7), adjacent to Upper(u), so the two merge.
    auto& s7 = std::get<UnitTriangularFactor>(c.factors.back());
    s7.s = symmetrize(s7.s + r.u);
    c.factors.push_back(lower_factor(r.t));
    c.factors.push_back(upper_factor(r.s));
    guard_reconstruction(h, chain_product(c), "unit_triangular_9");
    return c;
}

FactorChain spn_factor_8(const Mat& h) {
    require_even_square(h, "spn_factor_8");
    const Blocks b = blocks(h);
    if (!left_block_nonsingular(b.a1))
        throw std::invalid_argument("spn_factor_8: singular left upper block - use unit9 for this input");

    // h = Lower(S) Diag(A1) Upper(T); expand the diagonal and merge Upper(T)
    // into the rightmost factor S1.
    const Mat s = symmetrize(detail::solve_right(b.a2, b.a1));
    const Mat t = symmetrize(detail::solve_left(b.a1, b.b1));
    FactorChain c = diagonal_to_unit_triangular(b.a1, Orientation::StartUpper);
    auto& s1 = std::get<UnitTriangularFactor>(c.factors.front());
    s1.s = symmetrize(s1.s + t);
    c.factors.push_back(lower_factor(s));
    guard_reconstruction(h, chain_product(c), "spn_factor_8");
    return c;
}

FactorChain spp_factor(const Mat& h) {
    require_even_square(h, "spp_factor");
    const double nh = frobenius_norm(h);
    if (symmetry_residual(h) > 1e-10 * (1.0 + nh))
        throw std::invalid_argument("spp_factor: matrix is not symmetric");
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::to_eigen(symmetrize(h)));
        if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0))
            throw std::invalid_argument("spp_factor: matrix is not positive definite");
    }

    // h = Lower(S) Diag(P) Upper(S) with S = H3 H1^{-1} and P = H1; the
    // square-root factor L = Lower(S) Diag(P^{1/2}) expands into four unit
    // triangular factors via the p1 = p2 = P^{1/2} split.
    const Blocks b = blocks(h);
    const Mat p = symmetrize(b.a1);
    const Mat r = spd_sqrt(p);
    const Mat rinv = detail::inverse(r);
    const Mat s = symmetrize(detail::solve_right(b.a2, b.a1));
    const Mat eye = Mat::identity(p.rows());

    FactorChain c;
    c.d = p.rows();
    c.factors = {upper_factor(rinv - eye),
                 lower_factor(eye),
                 upper_factor(r - eye),
                 lower_factor(s - rinv)};

    const Mat l = chain_product(c);
    guard_reconstruction(h, l * transpose(l), "spp_factor");
    return c;
}

bool is_m_matrix(const Mat& a, double tol) {
    if (!a.square() || a.empty()) throw std::invalid_argument("is_m_matrix: matrix must be square and non-empty");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j && !(a(i, j) <= tol)) return false;
    Eigen::EigenSolver<Eigen::MatrixXd> es(detail::to_eigen(a));
    if (es.info() != Eigen::Success) throw std::runtime_error("is_m_matrix: eigenvalue computation failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (!(es.eigenvalues()(i).real() > tol)) return false;
    return true;
}

SpmForm spm_factor(const Mat& m, double tol) {
    require_even_square(m, "spm_factor");
    if (!is_m_matrix(m, tol)) throw std::invalid_argument("spm_factor: matrix is not an M-matrix");
    const Blocks b = blocks(m);
    if (!left_block_nonsingular(b.a1))
        throw std::invalid_argument("spm_factor: singular left upper block");

    SpmForm f;
    f.dpos = b.a1;
    f.h = symmetrize(detail::solve_right(b.a2, b.a1));
    f.k = symmetrize(detail::solve_left(b.a1, b.b1));

    // The factors of a symplectic M-matrix satisfy: dpos positive diagonal,
    // h and k entrywise nonpositive, h * dpos * k diagonal.
    const std::size_t d = f.dpos.rows();
    const double scale = 1.0 + max_abs(m);
    for (std::size_t i = 0; i < d; ++i) {
        if (!(f.dpos(i, i) > 0.0)) throw std::runtime_error("spm_factor: diagonal factor is not positive");
        for (std::size_t j = 0; j < d; ++j) {
            if (i != j && std::fabs(f.dpos(i, j)) > tol * scale)
                throw std::runtime_error("spm_factor: diagonal factor is not diagonal");
            if (f.h(i, j) > tol * scale || f.k(i, j) > tol * scale)
                throw std::runtime_error("spm_factor: triangular blocks are not entrywise nonpositive");
        }
    }
    const Mat hdk = f.h * f.dpos * f.k;
    const double hdk_scale = 1.0 + max_abs(hdk);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j && std::fabs(hdk(i, j)) > tol * hdk_scale)
                throw std::runtime_error("spm_factor: h * dpos * k is not diagonal");

    guard_reconstruction(m, chain_product(spm_chain(f)), "spm_factor");
    return f;
}

FactorChain spm_chain(const SpmForm& f) {
    FactorChain c;
    c.d = f.dpos.rows();
    c.factors = {upper_factor(f.k), Factor(diagonal_factor(f.dpos)), lower_factor(f.h)};
    return c;
}

Mat complete_symplectic(const Mat& a) {
    if (a.rows() % 2 != 0 || a.empty() || a.cols() != a.rows() / 2)
        throw std::invalid_argument("complete_symplectic: block must be 2d x d");
    const std::size_t d = a.cols();
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(a));
        const auto& sigma = svd.singularValues();
        if (!(sigma(sigma.size() - 1) > default_rank_tol(a) * sigma(0)))
            throw std::invalid_argument("complete_symplectic: block is rank-deficient");
    }
    if (!is_symmetric_pair(a))
        throw std::invalid_argument("complete_symplectic: block is not a symmetric pair");

    const Mat j = standard_j(d);
    const Mat g = symmetrize(transpose(a) * a);
    Mat b = -(j * detail::solve_right(a, g));
    for (double& v : b.data()) v += 0.0;  // normalize signed zeros
    return hcat(a, b);
}

Mat extend_to_symplectic_with_column(const Mat& u) {
    if (u.cols() != 1 || u.rows() % 2 != 0 || u.rows() == 0)
        throw std::invalid_argument("extend_to_symplectic_with_column: need a 2d x 1 column");
    if (frobenius_norm(u) == 0.0)
        throw std::invalid_argument("extend_to_symplectic_with_column: column must be nonzero");
    const std::size_t d = u.rows() / 2;
    const std::size_t n = 2 * d;
    const Mat j = standard_j(d);

    Mat a = u;
    while (a.cols() < d) {
        // Admissible directions keep [a, w] a symmetric pair: w in ker(a^T J),
        // the orthogonal complement of range(J a). Project each standard basis
        // vector there and take the first that keeps the block full-rank.
        const Mat ja = j * a;
        const Mat g = symmetrize(transpose(a) * a);
        bool appended = false;
        for (std::size_t cand = 0; cand < n && !appended; ++cand) {
            Mat w(n, 1);
            w(cand, 0) = 1.0;
            const Mat coeff = detail::solve_left(g, transpose(ja) * w);
            w = w - ja * coeff;
            const double wn = frobenius_norm(w);
            if (wn <= 1e-8) continue;
            w = (1.0 / wn) * w;
            const Mat trial = hcat(a, w);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(trial));
            const auto& sigma = svd.singularValues();
            if (sigma(sigma.size() - 1) > 1e-8 * sigma(0)) {
                a = trial;
                appended = true;
            }
        }
        if (!appended)
            throw std::runtime_error("extend_to_symplectic_with_column: no admissible basis extension found");
    }
    return complete_symplectic(a);
}

}  // namespace sympfact
