#pragma once

#include <stdexcept>
#include <string>

#include "sympfact/mat.hpp"
#include "sympfact/optimization.hpp"
#include "sympfact/parametrization.hpp"
#include "sympfact/symplectic.hpp"

namespace sympfact {

// Unreadable, unwritable, or unparsable files. Distinct from the
// domain-precondition errors (std::invalid_argument) so callers can map them
// to different exit codes.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MatrixFileFormat { Csv, Json };

struct MatrixFile {
    MatrixFileFormat format = MatrixFileFormat::Csv;
    std::string path;
};

// .csv -> Csv, .json -> Json; anything else is an IoError.
MatrixFileFormat format_from_path(const std::string& path);

// CSV: one comma-separated row per line. JSON: {"rows", "cols", "entries"}
// with entries as an array of row arrays. Writers emit 17 significant digits,
// enough for doubles to round-trip exactly.
Mat read_matrix(const MatrixFile& file);
Mat read_matrix(const std::string& path);
void write_matrix(const MatrixFile& file, const Mat& m);
void write_matrix(const std::string& path, const Mat& m);

// {"d", "factors": [{"kind": "upper"|"lower", "s": [[..]]} |
//                   {"kind": "diagonal", "p": [[..]]}, ...]}
// Index 0 is the rightmost (first-applied) factor.
FactorChain read_chain(const std::string& path);
void write_chain(const std::string& path, const FactorChain& c);

// {"d", "blocks": [[..], ...]}
ParamVector read_params(const std::string& path);
void write_params(const std::string& path, const ParamVector& p);

// {"d", "q": [[..]], "full_blocks": [[..] x5], "reduced_blocks": [[..] x5]}
SpsParams read_sps_params(const std::string& path);
void write_sps_params(const std::string& path, const SpsParams& sp);

// CSV with header "iteration,objective,grad_norm,residual".
void write_trace_csv(const std::string& path, const OptimizerTrace& trace);

}  // namespace sympfact
