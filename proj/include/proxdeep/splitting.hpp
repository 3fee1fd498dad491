#pragma once

#include <vector>

#include "proxdeep/network.hpp"
#include "proxdeep/penalties.hpp"
#include "proxdeep/tensor.hpp"

namespace proxdeep {

// Per-layer auxiliary values Z_l and scaled duals U_l, one column per
// observation.
struct SplitState {
    std::vector<Mat> zs;
    std::vector<Mat> us;
};

void validate_state(const Architecture& arch, const SplitState& state, index_t n);

// Per-layer, per-observation augmentation weights μ_{i,l} > 0. The usual
// case is a single scalar per layer, broadcast over observations.
struct MuSpec {
    std::vector<Vec> mus;

    static MuSpec uniform(const std::vector<double>& per_layer, index_t n);
    static MuSpec uniform(double mu, index_t layers, index_t n);

    void validate(index_t layers, index_t n) const;
};

// f̃_l(Z_{l+1}) with the prepended ones-row; the innermost layer consumes
// [1ᵀ; X]. Layer index 0-based.
Mat layer_input(const Architecture& arch, const std::vector<Mat>& zs, const Mat& x, index_t l);

// Layer residuals R_l = Z_l − W̃_l f̃_l(Z_{l+1}), matrix-free.
std::vector<Mat> apply_delta_w(const Architecture& arch, const ParamSet& params,
                               const std::vector<Mat>& zs, const Mat& x);

// Per-layer vec(W̃_l f̃_l(Z_{l+1})) through the (f̃ᵀ ⊗ I) structure. Satisfies
// Δ_w z + Δ_z w̃ = z for every state.
std::vector<Vec> apply_delta_z(const Architecture& arch, const ParamSet& params,
                               const std::vector<Mat>& zs, const Mat& x);

// Scaled-multiplier augmented Lagrangian
//   φ(w̃) + L(y, Z₁) + Σ_l ½‖R_l + U_l‖²_{Λ_{μ_l}} − ½ Σ_l ‖U_l‖²_{Λ_{μ_l}}.
double aug_lagrangian(const Mat& y, const Architecture& arch, const ParamSet& params,
                      const SplitState& state, const MuSpec& mu, const PenaltySpec& pen,
                      const Mat& x);

struct ResidualNorms {
    double primal = 0.0;  // √(Σ_l ‖R_l‖²_F)
    double dual = 0.0;    // √(Σ_l Σ_i μ_{i,l}²‖ΔZ_{l,i}‖²)
};

ResidualNorms residual_norms(const Architecture& arch, const ParamSet& params,
                             const SplitState& state, const Mat& x,
                             const std::vector<Mat>& prev_zs, const MuSpec& mu);

// Stacks per-layer matrices into one layer-major vector (z = vec(Z_1)…vec(Z_L)).
Vec stack_layers(const std::vector<Mat>& mats);

}  // namespace proxdeep
