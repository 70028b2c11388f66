#pragma once

#include <cstdint>
#include <vector>

#include "sympfact/mat.hpp"
#include "sympfact/symplectic.hpp"

namespace sympfact {

// Free parameters of a chain of unit triangular factors: one flat block of
// d(d+1)/2 reals per factor, packed row-by-row from the lower triangle.
struct ParamVector {
    std::size_t d = 0;
    std::vector<std::vector<double>> blocks;
};

std::size_t sym_param_count(std::size_t d);  // d(d+1)/2

// (s11, s21, s22, s31, ..., sdd); rejects non-symmetric input.
std::vector<double> pa_pack(const Mat& s);
Mat pa_unpack(const std::vector<double>& v, std::size_t d);

// Nine alternating unit triangular factors Upper(S9)...Lower(S2) Upper(S1);
// blocks[0] is S1, the rightmost factor. Surjective onto the group.
FactorChain sp_from_params(const ParamVector& p);

// Four alternating factors L = Lower(S4) Upper(S3) Lower(S2) Upper(S1);
// the symmetric positive definite symplectic element is L * L^T.
FactorChain spp_from_params(const ParamVector& p);

// A singular symplectic element (det(H - I) = 0) fixing the vector q e1:
// H = q * Lower(B10) Upper(S9) Lower(B8) ... Upper(S1) * q^{-1}, where the
// odd-position blocks are full d x d symmetric and the even-position blocks
// are (d-1) x (d-1) symmetric, bordered with a zero first row and column.
struct SpsParams {
    std::size_t d = 0;
    Mat q;  // symplectic conjugator
    std::vector<std::vector<double>> full_blocks;     // S1, S3, S5, S7, S9
    std::vector<std::vector<double>> reduced_blocks;  // S2, S4, S6, S8, S10
};

Mat sps_from_params(const SpsParams& sp);

// Extracts the parameter blocks of a chain of at most nine unit triangular
// factors in alternating order (upper at even chain indices), zero-padding
// the missing leading blocks.
ParamVector factor_to_params(const FactorChain& c);

// Chain of the coordinatewise blend (1-t) p0 + t p1, t in [0, 1].
FactorChain path_interpolate(const ParamVector& p0, const ParamVector& p1, double t);

// Seeded standard-normal draws; these back the synth command.
ParamVector random_sp_params(std::size_t d, std::uint64_t seed);
ParamVector random_spp_params(std::size_t d, std::uint64_t seed);
SpsParams random_sps_params(std::size_t d, std::uint64_t seed);

}  // namespace sympfact
