#include "proxdeep/penalties.hpp"

#include <cmath>

namespace proxdeep {

std::string penalty_name(PenaltyFamily f) {
    switch (f) {
        case PenaltyFamily::none: return "none";
        case PenaltyFamily::l1: return "l1";
        case PenaltyFamily::l2: return "l2";
    }
    return "?";
}

PenaltyFamily penalty_from_name(std::string_view name) {
    if (name == "none") return PenaltyFamily::none;
    if (name == "l1" || name == "lasso") return PenaltyFamily::l1;
    if (name == "l2" || name == "ridge") return PenaltyFamily::l2;
    throw ValueError("unknown penalty family: " + std::string(name));
}

void PenaltySpec::validate() const {
    if (gamma_w < 0.0) {
        throw ValueError("penalty gamma_w must be nonnegative");
    }
}

namespace {

void check_mask(const Vec& w, const Vec& bias_mask) {
    if (w.size() != bias_mask.size()) {
        throw DimError("penalty: bias mask length mismatch");
    }
}

inline bool skip(const PenaltySpec& spec, const Vec& mask, index_t j) {
    return !spec.penalize_bias && mask[j] != 0.0;
}

}  // namespace

double penalty_value(const PenaltySpec& spec, const Vec& w, const Vec& bias_mask) {
    check_mask(w, bias_mask);
    if (spec.family == PenaltyFamily::none) return 0.0;
    double acc = 0.0;
    for (index_t j = 0; j < w.size(); ++j) {
        if (skip(spec, bias_mask, j)) continue;
        acc += spec.family == PenaltyFamily::l1 ? std::abs(w[j]) : 0.5 * w[j] * w[j];
    }
    return spec.gamma_w * acc;
}

Vec prox_penalty(const PenaltySpec& spec, const Vec& x, double step, const Vec& bias_mask) {
    check_mask(x, bias_mask);
    if (step <= 0.0) {
        throw ValueError("prox_penalty: step must be positive");
    }
    if (spec.family == PenaltyFamily::none) return x;

    Vec out = x;
    const double t = step * spec.gamma_w;
    for (index_t j = 0; j < x.size(); ++j) {
        if (skip(spec, bias_mask, j)) continue;
        if (spec.family == PenaltyFamily::l1) {
            const double a = std::abs(x[j]) - t;
            out[j] = a > 0.0 ? (x[j] > 0.0 ? a : -a) : 0.0;
        } else {
            out[j] = x[j] / (1.0 + t);
        }
    }
    return out;
}

}  // namespace proxdeep
