#include "proxdeep/model_select.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "proxdeep/concurrency.hpp"

namespace proxdeep {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool linear_ridge_setting(const Architecture& arch, const PenaltySpec& pen) {
    return arch.depth() == 1 && arch.loss == LossId::squared_error &&
           (pen.family == PenaltyFamily::none || pen.family == PenaltyFamily::l2);
}

// Hat-matrix trace of the ridge refit ŷ_r = y_r F̃ᵀ(F̃F̃ᵀ+Γ)⁻¹F̃ per output row.
// The ‖y−ŷ‖² + (γ_w/2)‖w̃‖² objective makes the effective ridge weight γ_w/2.
double jacobian_df(const Architecture& arch, const PenaltySpec& pen, const Mat& x) {
    Mat f(x.rows() + 1, x.cols());
    f.row(0).setOnes();
    f.bottomRows(x.rows()) = x;

    Mat sys = f * f.transpose();
    if (pen.family == PenaltyFamily::l2 && pen.gamma_w > 0.0) {
        sys.diagonal().array() += 0.5 * pen.gamma_w;
        if (!pen.penalize_bias) sys(0, 0) -= 0.5 * pen.gamma_w;
    }
    Eigen::LLT<Mat> llt(sys);
    if (llt.info() != Eigen::Success) {
        sys.diagonal().array() += 1e-12;
        llt.compute(sys);
        if (llt.info() != Eigen::Success) {
            throw NumericalError("df_estimate: singular design Gram");
        }
    }
    const Mat solved = llt.solve(f);  // (G+Γ)⁻¹ F̃
    const double trace = (f.array() * solved.array()).sum();
    return static_cast<double>(arch.out_dim()) * trace;
}

}  // namespace

double df_estimate(const Architecture& arch, const ParamSet& fitted, const PenaltySpec& pen,
                   const Mat& y, const Mat& x, const DfOptions& opts,
                   const AdmmConfig& refit_cfg, const SplitState* warm_state) {
    arch.validate();
    if (arch.loss != LossId::squared_error) {
        throw ValueError("df_estimate: defined for the squared-error loss only");
    }
    if (y.rows() != arch.out_dim() || y.cols() != x.cols()) {
        throw DimError("df_estimate: response shape mismatch");
    }

    if (opts.mode == DfMode::jacobian) {
        if (!linear_ridge_setting(arch, pen)) {
            throw ValueError("df_estimate: jacobian mode is exact only for a single "
                             "linear layer with none/l2 penalty; use perturb mode");
        }
        return jacobian_df(arch, pen, x);
    }

    if (opts.epsilon <= 0.0) {
        throw ValueError("df_estimate: perturb mode needs epsilon > 0");
    }

    WarmStart warm;
    warm.params = fitted;
    if (warm_state) {
        warm.state = *warm_state;
    } else {
        warm.state.zs = forward_zs(arch, fitted, x);
        for (index_t l = 0; l < arch.depth(); ++l) {
            warm.state.us.push_back(Mat::Zero(arch.layer_dims[l], x.cols()));
        }
    }

    const index_t coords = y.size();
    std::vector<double> contrib(static_cast<std::size_t>(coords), 0.0);
    run_indexed(static_cast<int>(coords), [&](int ci) {
        const index_t r = ci % y.rows();
        const index_t i = ci / y.rows();
        Mat y_plus = y, y_minus = y;
        y_plus(r, i) += opts.epsilon;
        y_minus(r, i) -= opts.epsilon;
        const FitReport rep_p = fit(y_plus, x, arch, pen, refit_cfg, &warm);
        const FitReport rep_m = fit(y_minus, x, arch, pen, refit_cfg, &warm);
        const double fp = forward(arch, rep_p.params, x)(r, i);
        const double fm = forward(arch, rep_m.params, x)(r, i);
        contrib[static_cast<std::size_t>(ci)] = (fp - fm) / (2.0 * opts.epsilon);
    });

    double df = 0.0;
    for (double c : contrib) df += c;
    return df;
}

double sure(double err_in, double df, double sigma2) {
    if (sigma2 <= 0.0) throw ValueError("sure: sigma2 must be positive");
    return err_in + 2.0 * sigma2 * df;
}

double info_criterion(double loglik, double df, double c) {
    if (c <= 0.0) throw ValueError("info_criterion: cost c must be positive");
    return -2.0 * loglik + c * df;
}

SelectionReport evaluate_model(const Mat& y, const Mat& x, const Architecture& arch,
                               const PenaltySpec& pen, const AdmmConfig& cfg,
                               const SelectOptions& opts) {
    const FitReport rep = fit(y, x, arch, pen, cfg);
    SelectionReport out;
    out.cost_c = opts.cost_c;

    if (arch.loss == LossId::multinomial) {
        // No σ² analogue for classification: IC on the multinomial likelihood
        // with the nonzero-parameter count as model complexity.
        const double loss = multinomial_loss(LabelsOneHot::from_mat(y),
                                             forward(arch, rep.params, x));
        index_t nz = 0;
        for (const Mat& b : rep.params.blocks) nz += (b.array().abs() > 1e-8).count();
        out.df = static_cast<double>(nz);
        out.err_in = loss;
        out.ic = info_criterion(-loss, out.df, opts.cost_c);
        out.sure = std::numeric_limits<double>::quiet_NaN();
        out.sigma2 = std::numeric_limits<double>::quiet_NaN();
        out.df_mode = "nonzero-count";
        return out;
    }

    out.err_in = (y - forward(arch, rep.params, x)).squaredNorm();
    out.df = df_estimate(arch, rep.params, pen, y, x, opts.df, cfg, &rep.state);
    out.df_mode = opts.df.mode == DfMode::jacobian ? "jacobian-exact-linear" : "perturb";

    const double n_coords = static_cast<double>(y.size());
    if (opts.sigma2) {
        out.sigma2 = *opts.sigma2;
    } else {
        if (out.df >= n_coords) {
            throw ValueError("evaluate_model: df >= number of responses; "
                             "supply sigma2 explicitly");
        }
        out.sigma2 = out.err_in / (n_coords - out.df);
    }
    if (out.sigma2 <= 0.0) throw ValueError("evaluate_model: sigma2 must be positive");

    out.sure = sure(out.err_in, out.df, out.sigma2);
    const double loglik =
        -0.5 * n_coords * std::log(2.0 * kPi * out.sigma2) - out.err_in / (2.0 * out.sigma2);
    out.ic = info_criterion(loglik, out.df, opts.cost_c);
    return out;
}

}  // namespace proxdeep
