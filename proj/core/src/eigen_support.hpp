#pragma once

// Internal bridge between Mat and Eigen. Not installed; the public headers
// stay free of third-party types.

#include <Eigen/Dense>

#include "sympfact/mat.hpp"

namespace sympfact::detail {

inline Eigen::MatrixXd to_eigen(const Mat& m) {
    Eigen::MatrixXd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

inline Mat from_eigen(const Eigen::MatrixXd& e) {
    Mat m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
    return m;
}

// x = a^{-1} b via partial-pivot LU.
Mat solve_left(const Mat& a, const Mat& b);

// x = b a^{-1}, solved as (a^T)^{-1} b^T transposed back.
Mat solve_right(const Mat& b, const Mat& a);

Mat inverse(const Mat& a);

}  // namespace sympfact::detail
