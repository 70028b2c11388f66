#include "sympfact/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace sympfact {

namespace {

using nlohmann::json;

// %.17g round-trips any double; -0.0 is canonicalized to 0.
std::string fmt17(double v) {
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double canon(double v) { return v == 0.0 ? 0.0 : v; }

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw IoError(path + ": " + what);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(path, "cannot open for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        fail(path, "read failure");
    }
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(path, "cannot open for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        fail(path, "write failure");
    }
}

json parse_json(const std::string& path) {
    json j = json::parse(slurp(path), nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
        fail(path, "invalid JSON");
    }
    return j;
}

double number_at(const json& j, const std::string& path, const std::string& where) {
    if (!j.is_number()) {
        fail(path, where + ": expected a number");
    }
    return j.get<double>();
}

std::size_t size_at(const json& j, const std::string& path, const std::string& where) {
    if (!j.is_number_unsigned()) {
        fail(path, where + ": expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

// entries: non-empty array of equal-length row arrays of numbers.
Mat matrix_from_json(const json& j, const std::string& path, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        fail(path, where + ": expected a non-empty array of rows");
    }
    std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) {
        fail(path, where + ": rows must be non-empty arrays");
    }
    std::size_t cols = j[0].size();
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            fail(path, where + ": ragged rows");
        }
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = number_at(j[i][k], path, where);
        }
    }
    return m;
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) {
            row.push_back(canon(m(i, k)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> vector_from_json(const json& j, const std::string& path,
                                     const std::string& where) {
    if (!j.is_array()) {
        fail(path, where + ": expected an array of numbers");
    }
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& e : j) {
        v.push_back(number_at(e, path, where));
    }
    return v;
}

json vector_to_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) {
        a.push_back(canon(x));
    }
    return a;
}

Mat read_matrix_csv(const std::string& path) {
    std::string text = slurp(path);
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;  // tolerate blank lines (trailing newline etc.)
        }
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            const char* begin = cell.c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            while (end && *end == ' ') {
                ++end;
            }
            if (end == begin || *end != '\0') {
                fail(path, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail(path, "line " + std::to_string(line_no) + ": inconsistent column count");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty()) {
        fail(path, "no data");
    }
    std::size_t cols = rows.front().size();
    Mat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < cols; ++k) {
            m(i, k) = rows[i][k];
        }
    }
    return m;
}

void write_matrix_csv(const std::string& path, const Mat& m) {
    std::ostringstream out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t k = 0; k < m.cols(); ++k) {
            if (k) {
                out << ',';
            }
            out << fmt17(m(i, k));
        }
        out << '\n';
    }
    spill(path, out.str());
}

Mat read_matrix_json(const std::string& path) {
    json j = parse_json(path);
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
        fail(path, "expected an object with 'rows', 'cols', 'entries'");
    }
    std::size_t rows = size_at(j["rows"], path, "rows");
    std::size_t cols = size_at(j["cols"], path, "cols");
    Mat m = matrix_from_json(j["entries"], path, "entries");
    if (m.rows() != rows || m.cols() != cols) {
        fail(path, "declared shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                       " does not match entries " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()));
    }
    return m;
}

void write_matrix_json(const std::string& path, const Mat& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["entries"] = matrix_to_json(m);
    spill(path, j.dump(2) + "\n");
}

}  // namespace

MatrixFileFormat format_from_path(const std::string& path) {
    auto ends_with = [&](const std::string& suffix) {
        return path.size() >= suffix.size() &&
               path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".csv")) {
        return MatrixFileFormat::Csv;
    }
    if (ends_with(".json")) {
        return MatrixFileFormat::Json;
    }
    throw IoError(path + ": unrecognized matrix file extension (use .csv or .json)");
}

Mat read_matrix(const MatrixFile& file) {
    return file.format == MatrixFileFormat::Csv ? read_matrix_csv(file.path)
                                                : read_matrix_json(file.path);
}

Mat read_matrix(const std::string& path) {
    return read_matrix({format_from_path(path), path});
}

void write_matrix(const MatrixFile& file, const Mat& m) {
    if (file.format == MatrixFileFormat::Csv) {
        write_matrix_csv(file.path, m);
    } else {
        write_matrix_json(file.path, m);
    }
}

void write_matrix(const std::string& path, const Mat& m) {
    write_matrix({format_from_path(path), path}, m);
}

FactorChain read_chain(const std::string& path) {
    json j = parse_json(path);
    if (!j.is_object() || !j.contains("d") || !j.contains("factors")) {
        fail(path, "expected an object with 'd' and 'factors'");
    }
    std::size_t d = size_at(j["d"], path, "d");
    if (d == 0) {
        fail(path, "d must be positive");
    }
    if (!j["factors"].is_array()) {
        fail(path, "factors: expected an array");
    }
    FactorChain c;
    c.d = d;
    for (std::size_t i = 0; i < j["factors"].size(); ++i) {
        const json& f = j["factors"][i];
        std::string where = "factors[" + std::to_string(i) + "]";
        if (!f.is_object() || !f.contains("kind") || !f["kind"].is_string()) {
            fail(path, where + ": expected an object with a 'kind' string");
        }
        std::string kind = f["kind"].get<std::string>();
        if (kind == "upper" || kind == "lower") {
            if (!f.contains("s")) {
                fail(path, where + ": missing 's'");
            }
            Mat s = matrix_from_json(f["s"], path, where + ".s");
            if (s.rows() != d || s.cols() != d) {
                fail(path, where + ".s: expected a " + std::to_string(d) + "x" +
                               std::to_string(d) + " block");
            }
            c.factors.push_back(kind == "upper" ? Factor(upper_factor(s))
                                                : Factor(lower_factor(s)));
        } else if (kind == "diagonal") {
            if (!f.contains("p")) {
                fail(path, where + ": missing 'p'");
            }
            Mat p = matrix_from_json(f["p"], path, where + ".p");
            if (p.rows() != d || p.cols() != d) {
                fail(path, where + ".p: expected a " + std::to_string(d) + "x" +
                               std::to_string(d) + " block");
            }
            c.factors.push_back(diagonal_factor(p));
        } else {
            fail(path, where + ": unknown kind '" + kind + "'");
        }
    }
    return c;
}

void write_chain(const std::string& path, const FactorChain& c) {
    json factors = json::array();
    for (const Factor& f : c.factors) {
        json entry;
        if (const auto* t = std::get_if<UnitTriangularFactor>(&f)) {
            entry["kind"] = t->side == Side::Upper ? "upper" : "lower";
            entry["s"] = matrix_to_json(t->s);
        } else {
            const auto& dg = std::get<DiagonalFactor>(f);
            entry["kind"] = "diagonal";
            entry["p"] = matrix_to_json(dg.p);
        }
        factors.push_back(std::move(entry));
    }
    json j;
    j["d"] = c.d;
    j["factors"] = std::move(factors);
    spill(path, j.dump(2) + "\n");
}

ParamVector read_params(const std::string& path) {
    json j = parse_json(path);
    if (!j.is_object() || !j.contains("d") || !j.contains("blocks")) {
        fail(path, "expected an object with 'd' and 'blocks'");
    }
    ParamVector p;
    p.d = size_at(j["d"], path, "d");
    if (p.d == 0) {
        fail(path, "d must be positive");
    }
    if (!j["blocks"].is_array()) {
        fail(path, "blocks: expected an array of arrays");
    }
    std::size_t want = sym_param_count(p.d);
    for (std::size_t i = 0; i < j["blocks"].size(); ++i) {
        std::string where = "blocks[" + std::to_string(i) + "]";
        auto block = vector_from_json(j["blocks"][i], path, where);
        if (block.size() != want) {
            fail(path, where + ": expected " + std::to_string(want) + " entries, got " +
                           std::to_string(block.size()));
        }
        p.blocks.push_back(std::move(block));
    }
    return p;
}

void write_params(const std::string& path, const ParamVector& p) {
    json blocks = json::array();
    for (const auto& b : p.blocks) {
        blocks.push_back(vector_to_json(b));
    }
    json j;
    j["d"] = p.d;
    j["blocks"] = std::move(blocks);
    spill(path, j.dump(2) + "\n");
}

SpsParams read_sps_params(const std::string& path) {
    json j = parse_json(path);
    if (!j.is_object() || !j.contains("d") || !j.contains("q") || !j.contains("full_blocks") ||
        !j.contains("reduced_blocks")) {
        fail(path, "expected an object with 'd', 'q', 'full_blocks', 'reduced_blocks'");
    }
    SpsParams sp;
    sp.d = size_at(j["d"], path, "d");
    if (sp.d == 0) {
        fail(path, "d must be positive");
    }
    sp.q = matrix_from_json(j["q"], path, "q");
    if (sp.q.rows() != 2 * sp.d || sp.q.cols() != 2 * sp.d) {
        fail(path, "q: expected a " + std::to_string(2 * sp.d) + "x" + std::to_string(2 * sp.d) +
                       " matrix");
    }
    auto read_blocks = [&](const char* key, std::size_t want_len,
                           std::vector<std::vector<double>>& dst) {
        if (!j[key].is_array() || j[key].size() != 5) {
            fail(path, std::string(key) + ": expected exactly 5 blocks");
        }
        for (std::size_t i = 0; i < 5; ++i) {
            std::string where = std::string(key) + "[" + std::to_string(i) + "]";
            auto block = vector_from_json(j[key][i], path, where);
            if (block.size() != want_len) {
                fail(path, where + ": expected " + std::to_string(want_len) + " entries");
            }
            dst.push_back(std::move(block));
        }
    };
    read_blocks("full_blocks", sym_param_count(sp.d), sp.full_blocks);
    std::size_t reduced_len = sp.d > 1 ? sym_param_count(sp.d - 1) : 0;
    read_blocks("reduced_blocks", reduced_len, sp.reduced_blocks);
    return sp;
}

void write_sps_params(const std::string& path, const SpsParams& sp) {
    auto blocks_to_json = [](const std::vector<std::vector<double>>& blocks) {
        json a = json::array();
        for (const auto& b : blocks) {
            a.push_back(vector_to_json(b));
        }
        return a;
    };
    json j;
    j["d"] = sp.d;
    j["q"] = matrix_to_json(sp.q);
    j["full_blocks"] = blocks_to_json(sp.full_blocks);
    j["reduced_blocks"] = blocks_to_json(sp.reduced_blocks);
    spill(path, j.dump(2) + "\n");
}

void write_trace_csv(const std::string& path, const OptimizerTrace& trace) {
    std::ostringstream out;
    out << "iteration,objective,grad_norm,residual\n";
    for (const TracePoint& p : trace.points) {
        out << p.iteration << ',' << fmt17(p.objective) << ',' << fmt17(p.grad_norm) << ','
            << fmt17(p.residual) << '\n';
    }
    spill(path, out.str());
}

}  // namespace sympfact
