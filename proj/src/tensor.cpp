#include "proxdeep/tensor.hpp"

#include <string>

namespace proxdeep {

Vec vec_of(const Mat& m) {
    return Eigen::Map<const Vec>(m.data(), m.size());
}

Mat mat_of(const Vec& v, index_t rows, index_t cols) {
    if (rows * cols != v.size()) {
        throw DimError("mat_of: " + std::to_string(rows) + "x" + std::to_string(cols) +
                       " incompatible with length " + std::to_string(v.size()));
    }
    return Eigen::Map<const Mat>(v.data(), rows, cols);
}

Vec kron_apply_left(const Mat& a, const Vec& v, index_t block) {
    if (block <= 0 || v.size() != a.cols() * block) {
        throw DimError("kron_apply_left: vector of length " + std::to_string(v.size()) +
                       " does not partition into " + std::to_string(block) +
                       " segments of " + std::to_string(a.cols()));
    }
    Eigen::Map<const Mat> b(v.data(), a.cols(), block);
    Mat prod = a * b;
    return vec_of(prod);
}

Vec kron_apply_right(const Mat& b_t, const Vec& v, index_t block) {
    if (block <= 0 || v.size() != b_t.cols() * block) {
        throw DimError("kron_apply_right: vector of length " + std::to_string(v.size()) +
                       " does not match " + std::to_string(block) + "x" +
                       std::to_string(b_t.cols()));
    }
    Eigen::Map<const Mat> a(v.data(), block, b_t.cols());
    Mat prod = a * b_t.transpose();
    return vec_of(prod);
}

double weighted_norm_sq(const Vec& v, const Vec& diag) {
    if (v.size() != diag.size()) {
        throw DimError("weighted_norm_sq: length mismatch " + std::to_string(v.size()) +
                       " vs " + std::to_string(diag.size()));
    }
    if ((diag.array() <= 0.0).any()) {
        throw ValueError("weighted_norm_sq: diag entries must be strictly positive");
    }
    return (diag.array() * v.array().square()).sum();
}

}  // namespace proxdeep
