#pragma once

#include <optional>
#include <string>

#include "proxdeep/admm.hpp"

namespace proxdeep {

enum class DfMode { jacobian, perturb };

struct DfOptions {
    DfMode mode = DfMode::jacobian;
    double epsilon = 0.0;  // perturb step; must be > 0 in perturb mode
};

// Fitted-map sensitivity Σ_i ∂ŷ_i/∂y_i under the ℓ² loss.
//
// jacobian: exact hat-matrix trace of the single-linear-layer ridge refit;
// rejects deeper or non-ℓ² architectures. perturb: central finite
// differences, one warm-started refit per perturbed response coordinate.
double df_estimate(const Architecture& arch, const ParamSet& fitted, const PenaltySpec& pen,
                   const Mat& y, const Mat& x, const DfOptions& opts,
                   const AdmmConfig& refit_cfg, const SplitState* warm_state = nullptr);

// err_in + 2·sigma2·df
double sure(double err_in, double df, double sigma2);

// −2·loglik + c·df
double info_criterion(double loglik, double df, double c);

struct SelectionReport {
    double df = 0.0;
    double err_in = 0.0;
    double sure = 0.0;  // NaN for multinomial models
    double ic = 0.0;
    double cost_c = 0.0;
    double sigma2 = 0.0;  // NaN for multinomial models
    std::string df_mode;
};

struct SelectOptions {
    DfOptions df;
    double cost_c = 2.0;
    std::optional<double> sigma2;  // estimated as err/(N−df) when absent
};

// Fits-then-scores one candidate. For ℓ² models: err_in = ‖y−ŷ‖², df per
// opts, SURE and a Gaussian-likelihood IC. For multinomial models: df is the
// nonzero-parameter count, IC uses loglik = −loss, and SURE/σ² are NaN.
SelectionReport evaluate_model(const Mat& y, const Mat& x, const Architecture& arch,
                               const PenaltySpec& pen, const AdmmConfig& cfg,
                               const SelectOptions& opts);

}  // namespace proxdeep
