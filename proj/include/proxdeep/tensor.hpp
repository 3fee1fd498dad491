#pragma once

#include <Eigen/Dense>

#include "proxdeep/errors.hpp"

namespace proxdeep {

// Dense column-major matrix/vector values. Observations are stacked as
// columns everywhere, and vec() flattens column-major to match.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using index_t = Eigen::Index;

/// Column-major flattening of a matrix.
Vec vec_of(const Mat& m);

/// Inverse of vec_of for known dimensions.
Mat mat_of(const Vec& v, index_t rows, index_t cols);

// Applies (I_block ⊗ a) to v without materializing the Kronecker factor:
// v is vec(B) for B with a.cols() rows and `block` columns; returns vec(a·B).
Vec kron_apply_left(const Mat& a, const Vec& v, index_t block);

// Applies (b_t ⊗ I_block) to v without materializing the Kronecker factor:
// v is vec(A) for A with `block` rows and b_t.cols() columns; returns
// vec(A·b_tᵀ).
Vec kron_apply_right(const Mat& b_t, const Vec& v, index_t block);

// Σ diag_i · v_i²  with diag strictly positive.
double weighted_norm_sq(const Vec& v, const Vec& diag);

}  // namespace proxdeep
