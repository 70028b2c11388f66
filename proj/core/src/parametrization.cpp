#include "sympfact/parametrization.hpp"

#include <random>
#include <stdexcept>

#include "sympfact/factorization.hpp"

namespace sympfact {

namespace {

void require_blocks(const ParamVector& p, std::size_t count, const char* who) {
    std::string name(who);
    if (p.blocks.size() != count)
        throw std::invalid_argument(name + ": expected " + std::to_string(count) + " parameter blocks");
    for (const auto& b : p.blocks)
        if (b.size() != sym_param_count(p.d))
            throw std::invalid_argument(name + ": parameter block has wrong length");
}

// Alternating chain with upper factors at even indices; blocks[i] feeds
// factor i (index 0 rightmost).
FactorChain alternating_chain(const ParamVector& p) {
    FactorChain c;
    c.d = p.d;
    c.factors.reserve(p.blocks.size());
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        const Mat s = pa_unpack(p.blocks[i], p.d);
        c.factors.push_back(i % 2 == 0 ? upper_factor(s) : lower_factor(s));
    }
    return c;
}

std::vector<double> random_block(std::size_t len, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> b(len);
    for (double& v : b) v = gauss(rng);
    return b;
}

// q^{-1} = J^T q^T J for symplectic q; entry shuffling only, exact in
// floating point.
Mat symplectic_inverse(const Mat& q) {
    const std::size_t d = q.rows() / 2;
    const Mat j = standard_j(d);
    return transpose(j) * transpose(q) * j;
}

}  // namespace

std::size_t sym_param_count(std::size_t d) { return d * (d + 1) / 2; }

std::vector<double> pa_pack(const Mat& s) {
    if (!s.square() || s.empty()) throw std::invalid_argument("pa_pack: matrix must be square and non-empty");
    if (symmetry_residual(s) > 1e-10 * (1.0 + frobenius_norm(s)))
        throw std::invalid_argument("pa_pack: matrix is not symmetric");
    std::vector<double> v;
    v.reserve(sym_param_count(s.rows()));
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j) v.push_back(s(i, j));
    return v;
}

Mat pa_unpack(const std::vector<double>& v, std::size_t d) {
    if (v.size() != sym_param_count(d))
        throw std::invalid_argument("pa_unpack: vector length does not match d(d+1)/2");
    Mat s(d, d);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j, ++idx) {
            s(i, j) = v[idx];
            s(j, i) = v[idx];
        }
    return s;
}

FactorChain sp_from_params(const ParamVector& p) {
    require_blocks(p, 9, "sp_from_params");
    return alternating_chain(p);
}

FactorChain spp_from_params(const ParamVector& p) {
    require_blocks(p, 4, "spp_from_params");
    return alternating_chain(p);
}

Mat sps_from_params(const SpsParams& sp) {
    const std::size_t d = sp.d;
    if (d == 0) throw std::invalid_argument("sps_from_params: d must be positive");
    if (sp.q.rows() != 2 * d || sp.q.cols() != 2 * d)
        throw std::invalid_argument("sps_from_params: conjugator has wrong shape");
    if (!symplecticity_check(sp.q).passed)
        throw std::invalid_argument("sps_from_params: conjugator is not symplectic");
    if (sp.full_blocks.size() != 5 || sp.reduced_blocks.size() != 5)
        throw std::invalid_argument("sps_from_params: expected five full and five reduced blocks");

    FactorChain c;
    c.d = d;
    c.factors.reserve(10);
    for (std::size_t k = 0; k < 5; ++k) {
        if (sp.full_blocks[k].size() != sym_param_count(d))
            throw std::invalid_argument("sps_from_params: full block has wrong length");
        if (sp.reduced_blocks[k].size() != sym_param_count(d - 1))
            throw std::invalid_argument("sps_from_params: reduced block has wrong length");
        c.factors.push_back(upper_factor(pa_unpack(sp.full_blocks[k], d)));
        // Bordered block [[0, 0], [0, T]]: zero first row and column, so the
        // product fixes e1 exactly.
        Mat bordered(d, d);
        if (d > 1) set_block(bordered, 1, 1, pa_unpack(sp.reduced_blocks[k], d - 1));
        c.factors.push_back(lower_factor(bordered));
    }
    return sp.q * chain_product(c) * symplectic_inverse(sp.q);
}

ParamVector factor_to_params(const FactorChain& c) {
    if (c.factors.size() > 9)
        throw std::invalid_argument("factor_to_params: chain has more than nine factors");
    ParamVector p;
    p.d = c.d;
    p.blocks.assign(9, std::vector<double>(sym_param_count(c.d), 0.0));
    for (std::size_t i = 0; i < c.factors.size(); ++i) {
        const auto* u = std::get_if<UnitTriangularFactor>(&c.factors[i]);
        if (u == nullptr)
            throw std::invalid_argument("factor_to_params: chain contains a diagonal factor");
        const Side expected = i % 2 == 0 ? Side::Upper : Side::Lower;
        if (u->side != expected)
            throw std::invalid_argument("factor_to_params: chain does not alternate starting from an upper factor");
        p.blocks[i] = pa_pack(u->s);
    }
    return p;
}

FactorChain path_interpolate(const ParamVector& p0, const ParamVector& p1, double t) {
    require_blocks(p0, 9, "path_interpolate");
    require_blocks(p1, 9, "path_interpolate");
    if (p0.d != p1.d) throw std::invalid_argument("path_interpolate: dimension mismatch");
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("path_interpolate: t must lie in [0, 1]");

    ParamVector blend;
    blend.d = p0.d;
    blend.blocks.resize(9);
    for (std::size_t b = 0; b < 9; ++b) {
        blend.blocks[b].resize(p0.blocks[b].size());
        for (std::size_t i = 0; i < p0.blocks[b].size(); ++i)
            blend.blocks[b][i] = (1.0 - t) * p0.blocks[b][i] + t * p1.blocks[b][i];
    }
    return sp_from_params(blend);
}

ParamVector random_sp_params(std::size_t d, std::uint64_t seed) {
    if (d == 0) throw std::invalid_argument("random_sp_params: d must be positive");
    std::mt19937_64 rng(seed);
    ParamVector p;
    p.d = d;
    p.blocks.reserve(9);
    for (int i = 0; i < 9; ++i) p.blocks.push_back(random_block(sym_param_count(d), rng));
    return p;
}

ParamVector random_spp_params(std::size_t d, std::uint64_t seed) {
    if (d == 0) throw std::invalid_argument("random_spp_params: d must be positive");
    std::mt19937_64 rng(seed);
    ParamVector p;
    p.d = d;
    p.blocks.reserve(4);
    for (int i = 0; i < 4; ++i) p.blocks.push_back(random_block(sym_param_count(d), rng));
    return p;
}

SpsParams random_sps_params(std::size_t d, std::uint64_t seed) {
    if (d == 0) throw std::invalid_argument("random_sps_params: d must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Unit-norm random fixed direction, extended to a modest-norm conjugator.
    Mat u(2 * d, 1);
    double nrm = 0.0;
    while (nrm == 0.0) {
        for (std::size_t i = 0; i < 2 * d; ++i) u(i, 0) = gauss(rng);
        nrm = frobenius_norm(u);
    }
    u = (1.0 / nrm) * u;

    SpsParams sp;
    sp.d = d;
    sp.q = extend_to_symplectic_with_column(u);
    for (int i = 0; i < 5; ++i) sp.full_blocks.push_back(random_block(sym_param_count(d), rng));
    for (int i = 0; i < 5; ++i) sp.reduced_blocks.push_back(random_block(sym_param_count(d - 1), rng));
    return sp;
}

}  // namespace sympfact
