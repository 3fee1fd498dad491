#include "proxdeep/admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "proxdeep/path.hpp"

namespace proxdeep {

StepPolicy StepPolicy::fixed(double gamma) {
    StepPolicy p;
    p.kind = Kind::fixed;
    p.gamma = gamma;
    return p;
}

StepPolicy StepPolicy::backtracking(double beta, double gamma0) {
    StepPolicy p;
    p.kind = Kind::backtracking;
    p.beta = beta;
    p.gamma0 = gamma0;
    return p;
}

void StepPolicy::validate() const {
    if (kind == Kind::fixed) {
        if (gamma <= 0.0) throw ValueError("step policy: fixed gamma must be positive");
    } else {
        if (beta <= 0.0 || beta >= 1.0) throw ValueError("step policy: beta must be in (0,1)");
        if (gamma0 <= 0.0) throw ValueError("step policy: gamma0 must be positive");
    }
}

void AdmmConfig::validate() const {
    if (max_outer < 1) throw ValueError("admm: max_outer must be >= 1");
    if (z_inner < 1) throw ValueError("admm: z_inner must be >= 1");
    if (w_inner < 1) throw ValueError("admm: w_inner must be >= 1");
    if (tol_primal && *tol_primal <= 0.0) throw ValueError("admm: tol_primal must be positive");
    if (tol_dual && *tol_dual <= 0.0) throw ValueError("admm: tol_dual must be positive");
    step.validate();
    if (mu.empty()) throw ValueError("admm: mu must have at least one entry");
    for (double m : mu) {
        if (m <= 0.0) throw ValueError("admm: mu entries must be positive");
    }
    if (prox_inner < 1) throw ValueError("admm: prox_inner must be >= 1");
    if (prox_tol <= 0.0) throw ValueError("admm: prox_tol must be positive");
    if (init_scale <= 0.0) throw ValueError("admm: init_scale must be positive");
}

MuSpec AdmmConfig::resolve_mu(index_t layers, index_t n) const {
    if (mu.size() == 1) {
        return MuSpec::uniform(mu.front(), layers, n);
    }
    if (static_cast<index_t>(mu.size()) != layers) {
        throw ValueError("admm: mu must have 1 or " + std::to_string(layers) + " entries");
    }
    return MuSpec::uniform(mu, n);
}

double AdmmConfig::resolved_tol_primal(index_t total_z_dim) const {
    return tol_primal ? *tol_primal : 1e-6 * std::sqrt(static_cast<double>(total_z_dim));
}

double AdmmConfig::resolved_tol_dual(index_t total_z_dim) const {
    return tol_dual ? *tol_dual : 1e-6 * std::sqrt(static_cast<double>(total_z_dim));
}

namespace {

// Column i of m scaled by mu[i].
Mat col_scaled(const Mat& m, const Vec& mu) {
    return m * mu.asDiagonal();
}

}  // namespace

std::vector<Mat> grad_F_z(const Architecture& arch, const ParamSet& params,
                          const SplitState& state, const Mat& x, const MuSpec& mu) {
    const index_t L = arch.depth();
    const std::vector<Mat> res = apply_delta_w(arch, params, state.zs, x);
    std::vector<Mat> grad(L);
    for (index_t l = 0; l < L; ++l) {
        grad[l] = col_scaled(res[l] + state.us[l], mu.mus[l]);
    }
    // Back-coupling: layer l's residual reaches Z_{l+1} through W_l f_l(·).
    for (index_t l = 0; l + 1 < L; ++l) {
        const Mat w = params.blocks[l].rightCols(params.blocks[l].cols() - 1);
        const Mat lam_ru = col_scaled(res[l] + state.us[l], mu.mus[l]);
        grad[l + 1] -= link_jac_diag(arch.links[l], state.zs[l + 1])
                           .cwiseProduct(w.transpose() * lam_ru);
    }
    return grad;
}

double F_value(const Architecture& arch, const ParamSet& params, const SplitState& state,
               const Mat& x, const MuSpec& mu) {
    const std::vector<Mat> res = apply_delta_w(arch, params, state.zs, x);
    double value = 0.0;
    for (index_t l = 0; l < arch.depth(); ++l) {
        const Mat ru = res[l] + state.us[l];
        for (index_t i = 0; i < x.cols(); ++i) {
            value += 0.5 * mu.mus[l][i] * ru.col(i).squaredNorm();
        }
    }
    return value;
}

namespace {

struct ZProxDispatch {
    const Mat* y_raw = nullptr;
    const LabelsOneHot* y1h = nullptr;
    Vec y_vec;

    explicit ZProxDispatch(const Architecture& arch, const Mat& y, const LabelsOneHot* oh)
        : y_raw(&y), y1h(oh) {
        if (arch.loss == LossId::squared_error) y_vec = vec_of(y);
    }

    // prox of gamma * loss at the Z1 block; warm-started from the current Z1.
    Mat apply(const Architecture& arch, const Mat& z1_cand, const Mat& z1_curr, double gamma,
              const AdmmConfig& cfg, bool* converged) const {
        const Vec lam = Vec::Constant(z1_cand.size(), 1.0 / gamma);
        if (arch.loss == LossId::multinomial) {
            const Vec warm = vec_of(z1_curr);
            ProxResult pr = prox_multinomial(*y1h, vec_of(z1_cand), lam, cfg.prox_inner,
                                             cfg.prox_tol, &warm);
            if (!pr.converged) *converged = false;
            return mat_of(pr.s, z1_cand.rows(), z1_cand.cols());
        }
        Vec s = sq_prox(y_vec, vec_of(z1_cand), lam);
        return mat_of(s, z1_cand.rows(), z1_cand.cols());
    }
};

double composite_value(const Mat& y, const Architecture& arch, const ParamSet& params,
                       const SplitState& state, const Mat& x, const MuSpec& mu) {
    return F_value(arch, params, state, x, mu) + loss_value(arch.loss, y, state.zs[0]);
}

constexpr double kArmijoC = 1e-4;
constexpr double kGammaFloor = 1e-12;

}  // namespace

ZStepResult z_step(const Mat& y, const Architecture& arch, const ParamSet& params,
                   const SplitState& state, const Mat& x, const MuSpec& mu,
                   const AdmmConfig& cfg) {
    cfg.step.validate();
    LabelsOneHot y1h;
    const bool multinomial = arch.loss == LossId::multinomial;
    if (multinomial) y1h = LabelsOneHot::from_mat(y);
    const ZProxDispatch prox(arch, y, multinomial ? &y1h : nullptr);

    SplitState work = state;
    ZStepResult out;
    out.obj_before = composite_value(y, arch, params, work, x, mu);
    double phi = out.obj_before;

    const bool fixed = cfg.step.kind == StepPolicy::Kind::fixed;
    double gamma = fixed ? cfg.step.gamma : cfg.step.gamma0;

    for (int pass = 0; pass < cfg.z_inner; ++pass) {
        const std::vector<Mat> grads = grad_F_z(arch, params, work, x, mu);
        if (!fixed) gamma = std::min(gamma / cfg.step.beta, cfg.step.gamma0);

        while (true) {
            SplitState cand = work;
            for (index_t l = 0; l < arch.depth(); ++l) {
                cand.zs[l] = work.zs[l] - gamma * grads[l];
            }
            cand.zs[0] = prox.apply(arch, cand.zs[0], work.zs[0], gamma, cfg,
                                    &out.prox_converged);
            const double phi_cand = composite_value(y, arch, params, cand, x, mu);

            if (fixed) {
                work = std::move(cand);
                phi = phi_cand;
                ++out.accepted_steps;
                break;
            }

            double move_sq = 0.0;
            for (index_t l = 0; l < arch.depth(); ++l) {
                move_sq += (cand.zs[l] - work.zs[l]).squaredNorm();
            }
            const double needed = kArmijoC * move_sq / gamma;
            // absolute slack keeps roundoff near convergence from collapsing gamma
            if (phi_cand <= phi - needed + 1e-14 * (1.0 + std::abs(phi))) {
                work = std::move(cand);
                phi = phi_cand;
                ++out.accepted_steps;
                break;
            }
            gamma *= cfg.step.beta;
            if (gamma < kGammaFloor) {
                throw NumericalError("z-step: backtracking step collapsed below 1e-12");
            }
        }
    }

    out.zs = std::move(work.zs);
    out.obj_after = phi;
    out.last_gamma = gamma;
    return out;
}

namespace {

// Largest eigenvalue of a small symmetric PSD matrix by power iteration.
double lambda_max_psd(const Mat& g) {
    Vec v = Vec::Ones(g.rows());
    v.normalize();
    double prev = 0.0;
    for (int it = 0; it < 200; ++it) {
        Vec w = g * v;
        const double nrm = w.norm();
        if (nrm <= 0.0) return 0.0;
        v = w / nrm;
        if (std::abs(nrm - prev) <= 1e-12 * std::max(1.0, nrm)) break;
        prev = nrm;
    }
    return v.dot(g * v);
}

}  // namespace

WStepResult w_step(const Architecture& arch, const ParamSet& params, const SplitState& state,
                   const Mat& x, const MuSpec& mu, const PenaltySpec& pen,
                   const AdmmConfig& cfg) {
    pen.validate();
    WStepResult out;
    out.params = params;

    for (index_t l = 0; l < arch.depth(); ++l) {
        const Mat f = layer_input(arch, state.zs, x, l);  // Ñ×N
        const Vec& m = mu.mus[l];
        const Mat gram = f * m.asDiagonal() * f.transpose();
        const Mat rhs = (state.zs[l] + state.us[l]) * m.asDiagonal() * f.transpose();

        if (pen.family == PenaltyFamily::l1 && pen.gamma_w > 0.0) {
            // Forward-backward with the soft-threshold backward step.
            const double lmax = lambda_max_psd(gram);
            const double tau = 1.0 / (1.01 * lmax);
            const Vec mask = param_bias_mask(arch, l);
            Mat w = out.params.blocks[l];
            for (int it = 0; it < cfg.w_inner; ++it) {
                const Mat grad = w * gram - rhs;
                Vec stepped = vec_of(Mat(w - tau * grad));
                Vec next = prox_penalty(pen, stepped, tau, mask);
                Mat w_next = mat_of(next, w.rows(), w.cols());
                const double delta = (w_next - w).lpNorm<Eigen::Infinity>();
                w = std::move(w_next);
                if (delta <= 1e-14 * (1.0 + w.lpNorm<Eigen::Infinity>())) break;
            }
            out.params.blocks[l] = std::move(w);
            continue;
        }

        // l2 / none: one Cholesky of the small Gram factor serves all rows.
        Mat sys = gram;
        if (pen.family == PenaltyFamily::l2 && pen.gamma_w > 0.0) {
            sys.diagonal().array() += pen.gamma_w;
            if (!pen.penalize_bias) sys(0, 0) -= pen.gamma_w;
        }
        Eigen::LLT<Mat> llt(sys);
        if (llt.info() != Eigen::Success) {
            sys.diagonal().array() += 1e-10;
            llt.compute(sys);
            out.jitter_applied = true;
            if (llt.info() != Eigen::Success) {
                throw NumericalError("w-step: Gram system not positive definite even "
                                     "after jitter at layer " + std::to_string(l));
            }
        }
        out.params.blocks[l] = llt.solve(rhs.transpose()).transpose();
    }
    return out;
}

std::vector<Mat> u_step(const Architecture& arch, const ParamSet& params,
                        const SplitState& state, const Mat& x) {
    const std::vector<Mat> res = apply_delta_w(arch, params, state.zs, x);
    std::vector<Mat> us(arch.depth());
    for (index_t l = 0; l < arch.depth(); ++l) {
        us[l] = state.us[l] + res[l];
    }
    return us;
}

FitReport fit(const Mat& y, const Mat& x, const Architecture& arch, const PenaltySpec& pen,
              const AdmmConfig& cfg, const WarmStart* warm) {
    arch.validate();
    pen.validate();
    cfg.validate();
    const index_t n = x.cols();
    if (arch.loss == LossId::multinomial) {
        LabelsOneHot::from_mat(y);  // shape + one-hot check
    }
    if (y.rows() != arch.out_dim() || y.cols() != n) {
        throw DimError("fit: response is " + std::to_string(y.rows()) + "x" +
                       std::to_string(y.cols()) + ", expected " +
                       std::to_string(arch.out_dim()) + "x" + std::to_string(n));
    }

    MuSpec mu = cfg.resolve_mu(arch.depth(), n);

    FitReport report;
    SplitState state;
    if (warm) {
        validate_params(arch, warm->params);
        validate_state(arch, warm->state, n);
        report.params = warm->params;
        state = warm->state;
    } else {
        report.params = init_params(arch, cfg.seed, cfg.init_scale);
        state.zs = forward_zs(arch, report.params, x);
        state.us.clear();
        for (index_t l = 0; l < arch.depth(); ++l) {
            state.us.push_back(Mat::Zero(arch.layer_dims[l], n));
        }
    }

    index_t total_z = 0;
    for (index_t l = 0; l < arch.depth(); ++l) total_z += arch.layer_dims[l] * n;
    const double tol_primal = cfg.resolved_tol_primal(total_z);
    const double tol_dual = cfg.resolved_tol_dual(total_z);

    LabelsOneHot y1h;
    if (arch.loss == LossId::multinomial) y1h = LabelsOneHot::from_mat(y);

    bool jitter_seen = false;
    bool prox_warn_seen = false;

    for (int iter = 0; iter < cfg.max_outer; ++iter) {
        const std::vector<Mat> prev_zs = state.zs;

        auto run_z = [&]() {
            ZStepResult zr = z_step(y, arch, report.params, state, x, mu, cfg);
            state.zs = std::move(zr.zs);
            if (!zr.prox_converged && !prox_warn_seen) {
                prox_warn_seen = true;
                report.warnings.push_back(
                    "loss prox did not reach tolerance within prox_inner iterations "
                    "(first at outer iteration " + std::to_string(iter) + ")");
            }
        };
        auto run_w = [&]() {
            WStepResult wr = w_step(arch, report.params, state, x, mu, pen, cfg);
            report.params = std::move(wr.params);
            jitter_seen = jitter_seen || wr.jitter_applied;
        };

        if (cfg.order == BlockOrder::zwu) {
            run_z();
            run_w();
        } else {
            run_w();
            run_z();
        }
        state.us = u_step(arch, report.params, state, x);

        const ResidualNorms rn = residual_norms(arch, report.params, state, x, prev_zs, mu);

        double objective = loss_value(arch.loss, y, forward(arch, report.params, x));
        for (index_t l = 0; l < arch.depth(); ++l) {
            objective += penalty_value(pen, vec_of(report.params.blocks[l]),
                                       param_bias_mask(arch, l));
        }
        const double aug = aug_lagrangian(y, arch, report.params, state, mu, pen, x);

        FitRecord rec;
        rec.iter = iter;
        rec.objective = objective;
        rec.aug_lagrangian = aug;
        rec.primal_res = rn.primal;
        rec.dual_res = rn.dual;
        rec.train_accuracy =
            arch.loss == LossId::multinomial
                ? classify_rate(predict_output(arch, report.params, x), y1h)
                : std::numeric_limits<double>::quiet_NaN();
        report.iterations.push_back(rec);

        if (!std::isfinite(objective) || !std::isfinite(aug)) {
            throw DivergenceError("fit: non-finite objective at iteration " +
                                  std::to_string(iter));
        }

        if (rn.primal <= tol_primal && rn.dual <= tol_dual) {
            report.converged = true;
            break;
        }

        if (cfg.mu_balancing) {
            // Scaled duals u = κ/μ track the rescaling.
            if (rn.primal > 10.0 * rn.dual) {
                for (Vec& v : mu.mus) v *= 2.0;
                for (Mat& u : state.us) u *= 0.5;
            } else if (rn.dual > 10.0 * rn.primal) {
                for (Vec& v : mu.mus) v *= 0.5;
                for (Mat& u : state.us) u *= 2.0;
            }
        }
    }

    if (jitter_seen) {
        report.warnings.push_back("w-step: singular Gram; ridge jitter 1e-10 applied");
    }
    report.state = std::move(state);
    report.nonzero_fraction = nonzero_fraction(report.params);
    return report;
}

}  // namespace proxdeep
