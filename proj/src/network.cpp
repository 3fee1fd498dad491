#include "proxdeep/network.hpp"

#include <string>

#include "proxdeep/rng.hpp"

namespace proxdeep {

index_t Architecture::fan_in(index_t l) const {
    return l + 1 < depth() ? layer_dims[l + 1] : input_dim;
}

void Architecture::validate() const {
    if (layer_dims.empty()) {
        throw ValueError("architecture: needs at least one layer");
    }
    if (input_dim < 1) {
        throw ValueError("architecture: input_dim must be >= 1");
    }
    for (index_t d : layer_dims) {
        if (d < 1) throw ValueError("architecture: layer dims must be >= 1");
    }
    if (static_cast<index_t>(links.size()) != depth() - 1) {
        throw ValueError("architecture: expected " + std::to_string(depth() - 1) +
                         " links, got " + std::to_string(links.size()));
    }
    if (loss == LossId::multinomial && out_dim() < 2) {
        throw ValueError("architecture: multinomial loss needs >= 2 classes");
    }
}

Vec ParamSet::stacked() const {
    Vec out(total_size());
    index_t at = 0;
    for (const Mat& b : blocks) {
        out.segment(at, b.size()) = vec_of(b);
        at += b.size();
    }
    return out;
}

index_t ParamSet::total_size() const {
    index_t total = 0;
    for (const Mat& b : blocks) total += b.size();
    return total;
}

void validate_params(const Architecture& arch, const ParamSet& params) {
    if (static_cast<index_t>(params.blocks.size()) != arch.depth()) {
        throw DimError("params: expected " + std::to_string(arch.depth()) + " blocks");
    }
    for (index_t l = 0; l < arch.depth(); ++l) {
        const Mat& b = params.blocks[l];
        if (b.rows() != arch.layer_dims[l] || b.cols() != arch.fan_in(l) + 1) {
            throw DimError("params: block " + std::to_string(l) + " is " +
                           std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                           ", expected " + std::to_string(arch.layer_dims[l]) + "x" +
                           std::to_string(arch.fan_in(l) + 1));
        }
    }
}

ParamSet init_params(const Architecture& arch, std::uint64_t seed, double scale) {
    arch.validate();
    if (scale <= 0.0) {
        throw ValueError("init_params: scale must be positive");
    }
    Rng rng(derive_seed(seed, "init"));
    ParamSet out;
    out.blocks.reserve(arch.depth());
    for (index_t l = 0; l < arch.depth(); ++l) {
        Mat b(arch.layer_dims[l], arch.fan_in(l) + 1);
        b.col(0).setZero();  // biases start at zero
        for (index_t c = 1; c < b.cols(); ++c) {
            for (index_t r = 0; r < b.rows(); ++r) {
                b(r, c) = rng.uniform(-scale, scale);
            }
        }
        out.blocks.push_back(std::move(b));
    }
    return out;
}

namespace {

// W̃_l applied to values with the ones-row prepended implicitly.
Mat affine_apply(const Mat& block, const Mat& values) {
    if (block.cols() != values.rows() + 1) {
        throw DimError("affine_apply: block expects fan-in " +
                       std::to_string(block.cols() - 1) + ", got " +
                       std::to_string(values.rows()));
    }
    Mat out = block.rightCols(block.cols() - 1) * values;
    out.colwise() += block.col(0);
    return out;
}

}  // namespace

std::vector<Mat> forward_zs(const Architecture& arch, const ParamSet& params, const Mat& x) {
    arch.validate();
    validate_params(arch, params);
    if (x.rows() != arch.input_dim) {
        throw DimError("forward: input has " + std::to_string(x.rows()) +
                       " features, expected " + std::to_string(arch.input_dim));
    }
    const index_t L = arch.depth();
    std::vector<Mat> zs(L);
    zs[L - 1] = affine_apply(params.blocks[L - 1], x);
    for (index_t l = L - 2; l >= 0; --l) {
        zs[l] = affine_apply(params.blocks[l], link_eval(arch.links[l], zs[l + 1]));
    }
    return zs;
}

Mat forward(const Architecture& arch, const ParamSet& params, const Mat& x) {
    return forward_zs(arch, params, x).front();
}

Mat predict_output(const Architecture& arch, const ParamSet& params, const Mat& x) {
    Mat z1 = forward(arch, params, x);
    return arch.loss == LossId::multinomial ? softmax_cols(z1) : z1;
}

Vec param_bias_mask(const Architecture& arch, index_t l) {
    const index_t rows = arch.layer_dims[l];
    const index_t cols = arch.fan_in(l) + 1;
    Vec mask = Vec::Zero(rows * cols);
    mask.head(rows).setOnes();  // first column of the column-major vec
    return mask;
}

double nonzero_fraction(const ParamSet& params, double thresh) {
    index_t nz = 0, total = 0;
    for (const Mat& b : params.blocks) {
        nz += (b.array().abs() > thresh).count();
        total += b.size();
    }
    return total == 0 ? 0.0 : static_cast<double>(nz) / static_cast<double>(total);
}

}  // namespace proxdeep
