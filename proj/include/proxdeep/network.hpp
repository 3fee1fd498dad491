#pragma once

#include <cstdint>
#include <vector>

#include "proxdeep/links.hpp"
#include "proxdeep/objectives.hpp"
#include "proxdeep/tensor.hpp"

namespace proxdeep {

// Layer sizes run outermost-first: layer_dims[0] is the output/class
// dimension, layer_dims[L-1] is the innermost layer, which multiplies the
// input. links[l] is applied to layer l+1's values when forming layer l
// (0-based), so there are L-1 of them.
struct Architecture {
    index_t input_dim = 0;
    std::vector<index_t> layer_dims;
    std::vector<LinkId> links;
    LossId loss = LossId::squared_error;

    index_t depth() const { return static_cast<index_t>(layer_dims.size()); }
    index_t out_dim() const { return layer_dims.front(); }

    // Width of what layer l consumes: N_{l+1}, or M for the innermost layer.
    index_t fan_in(index_t l) const;

    void validate() const;
};

// Extended per-layer weight blocks W̃_l = [b_l | W_l], sized
// N_l × (fan_in(l)+1).
struct ParamSet {
    std::vector<Mat> blocks;

    // Stacked vec of all blocks, layer-major.
    Vec stacked() const;
    index_t total_size() const;
};

void validate_params(const Architecture& arch, const ParamSet& params);

// i.i.d. uniform(±scale) weights, zero biases, deterministic in seed.
ParamSet init_params(const Architecture& arch, std::uint64_t seed, double scale);

// Pre-loss layer values Z₁ for a batch of observation columns.
Mat forward(const Architecture& arch, const ParamSet& params, const Mat& x);

// All intermediate Z_L..Z_1; the layer equations hold with exact equality.
std::vector<Mat> forward_zs(const Architecture& arch, const ParamSet& params, const Mat& x);

// Reporting-side predictions: softmax columns for multinomial, Z₁ otherwise.
Mat predict_output(const Architecture& arch, const ParamSet& params, const Mat& x);

// 1 on the bias (first) column of vec(W̃_l), 0 elsewhere.
Vec param_bias_mask(const Architecture& arch, index_t l);

// Fraction of |w̃_j| > thresh over all coordinates.
double nonzero_fraction(const ParamSet& params, double thresh = 1e-8);

}  // namespace proxdeep
