#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "proxdeep/tensor.hpp"

namespace proxdeep {

enum class LossId { squared_error, multinomial };

std::string loss_name(LossId id);
LossId loss_from_name(std::string_view name);

// K×N matrix of {0,1} with exactly one 1 per column.
struct LabelsOneHot {
    Mat m;

    index_t k() const { return m.rows(); }
    index_t n() const { return m.cols(); }

    // Validates the one-hot invariant.
    static LabelsOneHot from_mat(Mat m);
    static LabelsOneHot from_labels(const std::vector<index_t>& labels, index_t k);
};

// Column-wise softmax probabilities, max-subtracted for overflow safety.
Mat softmax_cols(const Mat& z);

// Multinomial cross-entropy  Σ_i [ logsumexp(z₁ column i) − yᵢᵀ z₁ᵢ ]  ≥ 0.
double multinomial_loss(const LabelsOneHot& y, const Mat& z1);

// vec(P − Y) with P = softmax_cols(z1).
Vec multinomial_grad(const LabelsOneHot& y, const Mat& z1);

struct ProxResult {
    Vec s;
    bool converged = false;
    double residual = 0.0;
    int iters = 0;
};

// argmin_s  L(y,s) + ½‖s−η‖²_Λ  for diagonal Λ = Diag(lam), lam > 0.
// Solved by forward-backward passes with the fixed step 1/(1/4 + max lam);
// stops when ‖∇L(s) + Λ(s−η)‖ ≤ tol·(1+‖Λη‖). Non-convergence within
// inner_iters is reported in the result, never thrown.
ProxResult prox_multinomial(const LabelsOneHot& y, const Vec& eta, const Vec& lam,
                            int inner_iters = 50, double tol = 1e-8,
                            const Vec* warm = nullptr);

// ‖y − s‖² (no ½ factor).
double sq_loss(const Vec& y, const Vec& s);

// argmin_s ‖y−s‖² + ½‖s−η‖²_Λ  =  (2y + Λη) ⊘ (2 + Λ), elementwise.
Vec sq_prox(const Vec& y, const Vec& eta, const Vec& lam);

// Loss dispatch on pre-loss layer values Z₁ (columns = observations).
double loss_value(LossId loss, const Mat& y, const Mat& z1);

}  // namespace proxdeep
