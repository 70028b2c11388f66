#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace sympfact {

// Dense real matrix, row-major storage. Entries supplied from outside the
// library are validated to be finite; NaN/Inf never enter a public operation.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols);  // zero-filled
    Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Mat identity(std::size_t n);
    static Mat diagonal(const std::vector<double>& entries);
    static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

bool same_shape(const Mat& a, const Mat& b);

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator-(const Mat& a);
Mat operator*(double c, const Mat& a);

// Row-major triple loop with a fixed (i,k,j) summation order, so repeated
// calls on identical operands produce bit-identical results.
Mat mat_mul(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);

Mat transpose(const Mat& a);
Mat block(const Mat& a, std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols);
void set_block(Mat& a, std::size_t row0, std::size_t col0, const Mat& sub);
Mat hcat(const Mat& a, const Mat& b);
Mat vcat(const Mat& a, const Mat& b);

double frobenius_norm(const Mat& a);
double max_abs(const Mat& a);
bool equal(const Mat& a, const Mat& b);  // exact, entrywise

// (m + m^T)/2; the result is exactly symmetric in floating point.
Mat symmetrize(const Mat& m);
double symmetry_residual(const Mat& m);  // ||m - m^T||_F

}  // namespace sympfact
