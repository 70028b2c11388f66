#include "sympfact/mat.hpp"

#include <cmath>
#include <stdexcept>

namespace sympfact {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

void check_finite(const std::vector<double>& entries) {
    for (double v : entries) {
        if (!std::isfinite(v)) throw std::invalid_argument("matrix entries must be finite");
    }
}

}  // namespace

Mat::Mat(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(data_.size() == rows_ * cols_, "entry count does not match matrix shape");
    check_finite(data_);
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diagonal(const std::vector<double>& entries) {
    Mat m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        require(std::isfinite(entries[i]), "matrix entries must be finite");
        m(i, i) = entries[i];
    }
    return m;
}

Mat Mat::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        require(row.size() == c, "rows must all have the same length");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Mat(r, c, std::move(data));
}

bool same_shape(const Mat& a, const Mat& b) {
    return a.rows() == b.rows() && a.cols() == b.cols();
}

Mat operator+(const Mat& a, const Mat& b) {
    require(same_shape(a, b), "shape mismatch in matrix addition");
    Mat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] + b.data()[i];
    return r;
}

Mat operator-(const Mat& a, const Mat& b) {
    require(same_shape(a, b), "shape mismatch in matrix subtraction");
    Mat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] - b.data()[i];
    return r;
}

Mat operator-(const Mat& a) {
    Mat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = -a.data()[i];
    return r;
}

Mat operator*(double c, const Mat& a) {
    Mat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = c * a.data()[i];
    return r;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    require(a.cols() == b.rows(), "inner dimensions must agree in mat_mul");
    Mat r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                r(i, j) += aik * b(k, j);
            }
        }
    }
    return r;
}

Mat operator*(const Mat& a, const Mat& b) { return mat_mul(a, b); }

Mat transpose(const Mat& a) {
    Mat r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

Mat block(const Mat& a, std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) {
    require(row0 + nrows <= a.rows() && col0 + ncols <= a.cols(), "block exceeds matrix bounds");
    Mat r(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j) r(i, j) = a(row0 + i, col0 + j);
    return r;
}

void set_block(Mat& a, std::size_t row0, std::size_t col0, const Mat& sub) {
    require(row0 + sub.rows() <= a.rows() && col0 + sub.cols() <= a.cols(),
            "block exceeds matrix bounds");
    for (std::size_t i = 0; i < sub.rows(); ++i)
        for (std::size_t j = 0; j < sub.cols(); ++j) a(row0 + i, col0 + j) = sub(i, j);
}

Mat hcat(const Mat& a, const Mat& b) {
    require(a.rows() == b.rows(), "row counts must agree in hcat");
    Mat r(a.rows(), a.cols() + b.cols());
    set_block(r, 0, 0, a);
    set_block(r, 0, a.cols(), b);
    return r;
}

Mat vcat(const Mat& a, const Mat& b) {
    require(a.cols() == b.cols(), "column counts must agree in vcat");
    Mat r(a.rows() + b.rows(), a.cols());
    set_block(r, 0, 0, a);
    set_block(r, a.rows(), 0, b);
    return r;
}

double frobenius_norm(const Mat& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double max_abs(const Mat& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::fabs(v));
    return m;
}

bool equal(const Mat& a, const Mat& b) {
    return same_shape(a, b) && a.data() == b.data();
}

Mat symmetrize(const Mat& m) {
    if (!m.square()) throw std::invalid_argument("symmetrize requires a square matrix");
    Mat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = (m(i, j) + m(j, i)) / 2.0;
    return r;
}

double symmetry_residual(const Mat& m) {
    if (!m.square()) throw std::invalid_argument("symmetry_residual requires a square matrix");
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double d = m(i, j) - m(j, i);
            s += d * d;
        }
    return std::sqrt(s);
}

}  // namespace sympfact
