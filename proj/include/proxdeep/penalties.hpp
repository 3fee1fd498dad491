#pragma once

#include <string>
#include <string_view>

#include "proxdeep/tensor.hpp"

namespace proxdeep {

enum class PenaltyFamily { none, l1, l2 };

std::string penalty_name(PenaltyFamily f);
PenaltyFamily penalty_from_name(std::string_view name);

struct PenaltySpec {
    PenaltyFamily family = PenaltyFamily::none;
    double gamma_w = 0.0;
    bool penalize_bias = true;

    void validate() const;
};

// bias_mask: nonzero entries mark bias coordinates. Masked coordinates are
// skipped when penalize_bias is off.
double penalty_value(const PenaltySpec& spec, const Vec& w, const Vec& bias_mask);

// prox of step·φ at x: soft-threshold (l1), shrink x/(1+step·γ_w) (l2),
// identity (none). Excluded coordinates pass through unchanged.
Vec prox_penalty(const PenaltySpec& spec, const Vec& x, double step, const Vec& bias_mask);

}  // namespace proxdeep
