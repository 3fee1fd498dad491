#include "proxdeep/splitting.hpp"

#include <cmath>
#include <string>

namespace proxdeep {

void validate_state(const Architecture& arch, const SplitState& state, index_t n) {
    if (static_cast<index_t>(state.zs.size()) != arch.depth() ||
        static_cast<index_t>(state.us.size()) != arch.depth()) {
        throw DimError("split state: expected " + std::to_string(arch.depth()) + " layers");
    }
    for (index_t l = 0; l < arch.depth(); ++l) {
        if (state.zs[l].rows() != arch.layer_dims[l] || state.zs[l].cols() != n ||
            state.us[l].rows() != arch.layer_dims[l] || state.us[l].cols() != n) {
            throw DimError("split state: layer " + std::to_string(l) + " shape mismatch");
        }
    }
}

MuSpec MuSpec::uniform(const std::vector<double>& per_layer, index_t n) {
    MuSpec out;
    out.mus.reserve(per_layer.size());
    for (double m : per_layer) {
        out.mus.push_back(Vec::Constant(n, m));
    }
    return out;
}

MuSpec MuSpec::uniform(double mu, index_t layers, index_t n) {
    MuSpec out;
    out.mus.assign(layers, Vec::Constant(n, mu));
    return out;
}

void MuSpec::validate(index_t layers, index_t n) const {
    if (static_cast<index_t>(mus.size()) != layers) {
        throw DimError("mu: expected " + std::to_string(layers) + " layers");
    }
    for (const Vec& m : mus) {
        if (m.size() != n) throw DimError("mu: per-observation length mismatch");
        if ((m.array() <= 0.0).any()) throw ValueError("mu: entries must be positive");
    }
}

Mat layer_input(const Architecture& arch, const std::vector<Mat>& zs, const Mat& x, index_t l) {
    const bool innermost = (l + 1 == arch.depth());
    const Mat& src = innermost ? x : zs[l + 1];
    Mat out(src.rows() + 1, src.cols());
    out.row(0).setOnes();
    out.bottomRows(src.rows()) = innermost ? src : link_eval(arch.links[l], src);
    return out;
}

std::vector<Mat> apply_delta_w(const Architecture& arch, const ParamSet& params,
                               const std::vector<Mat>& zs, const Mat& x) {
    std::vector<Mat> res(arch.depth());
    for (index_t l = 0; l < arch.depth(); ++l) {
        res[l] = zs[l] - params.blocks[l] * layer_input(arch, zs, x, l);
    }
    return res;
}

std::vector<Vec> apply_delta_z(const Architecture& arch, const ParamSet& params,
                               const std::vector<Mat>& zs, const Mat& x) {
    std::vector<Vec> out(arch.depth());
    for (index_t l = 0; l < arch.depth(); ++l) {
        const Mat f = layer_input(arch, zs, x, l);
        // vec(W̃_l f̃_l) = (f̃_lᵀ ⊗ I_{N_l}) w̃_l
        out[l] = kron_apply_right(f.transpose(), vec_of(params.blocks[l]),
                                  arch.layer_dims[l]);
    }
    return out;
}

double aug_lagrangian(const Mat& y, const Architecture& arch, const ParamSet& params,
                      const SplitState& state, const MuSpec& mu, const PenaltySpec& pen,
                      const Mat& x) {
    validate_state(arch, state, x.cols());
    mu.validate(arch.depth(), x.cols());

    double value = loss_value(arch.loss, y, state.zs[0]);
    for (index_t l = 0; l < arch.depth(); ++l) {
        value += penalty_value(pen, vec_of(params.blocks[l]), param_bias_mask(arch, l));
    }
    const std::vector<Mat> res = apply_delta_w(arch, params, state.zs, x);
    for (index_t l = 0; l < arch.depth(); ++l) {
        const Mat ru = res[l] + state.us[l];
        for (index_t i = 0; i < x.cols(); ++i) {
            value += 0.5 * mu.mus[l][i] *
                     (ru.col(i).squaredNorm() - state.us[l].col(i).squaredNorm());
        }
    }
    return value;
}

ResidualNorms residual_norms(const Architecture& arch, const ParamSet& params,
                             const SplitState& state, const Mat& x,
                             const std::vector<Mat>& prev_zs, const MuSpec& mu) {
    ResidualNorms out;
    double primal_sq = 0.0, dual_sq = 0.0;
    const std::vector<Mat> res = apply_delta_w(arch, params, state.zs, x);
    for (index_t l = 0; l < arch.depth(); ++l) {
        primal_sq += res[l].squaredNorm();
        for (index_t i = 0; i < x.cols(); ++i) {
            const double m = mu.mus[l][i];
            dual_sq += m * m * (state.zs[l].col(i) - prev_zs[l].col(i)).squaredNorm();
        }
    }
    out.primal = std::sqrt(primal_sq);
    out.dual = std::sqrt(dual_sq);
    return out;
}

Vec stack_layers(const std::vector<Mat>& mats) {
    index_t total = 0;
    for (const Mat& m : mats) total += m.size();
    Vec out(total);
    index_t at = 0;
    for (const Mat& m : mats) {
        out.segment(at, m.size()) = vec_of(m);
        at += m.size();
    }
    return out;
}

}  // namespace proxdeep
