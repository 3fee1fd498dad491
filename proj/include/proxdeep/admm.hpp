#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proxdeep/splitting.hpp"

namespace proxdeep {

struct StepPolicy {
    enum class Kind { fixed, backtracking };

    Kind kind = Kind::backtracking;
    double gamma = 1.0;   // fixed step
    double beta = 0.5;    // backtracking shrink factor
    double gamma0 = 1.0;  // backtracking initial step

    static StepPolicy fixed(double gamma);
    static StepPolicy backtracking(double beta = 0.5, double gamma0 = 1.0);

    void validate() const;
};

enum class BlockOrder { zwu, wzu };

struct AdmmConfig {
    int max_outer = 1000;
    int z_inner = 10;
    int w_inner = 25;
    // Absent tolerance means 1e-6·√(total z dimension).
    std::optional<double> tol_primal;
    std::optional<double> tol_dual;
    StepPolicy step;
    std::vector<double> mu = {1.0};  // per layer; size 1 broadcasts
    BlockOrder order = BlockOrder::zwu;
    bool mu_balancing = false;  // ×2 / ÷2 on a 10× primal/dual imbalance
    int prox_inner = 50;
    double prox_tol = 1e-8;
    std::uint64_t seed = 0;
    double init_scale = 0.1;

    void validate() const;
    MuSpec resolve_mu(index_t layers, index_t n) const;
    double resolved_tol_primal(index_t total_z_dim) const;
    double resolved_tol_dual(index_t total_z_dim) const;
};

struct FitRecord {
    int iter = 0;
    double objective = 0.0;
    double aug_lagrangian = 0.0;
    double primal_res = 0.0;
    double dual_res = 0.0;
    double train_accuracy = 0.0;
};

struct FitReport {
    std::vector<FitRecord> iterations;
    ParamSet params;
    SplitState state;
    double nonzero_fraction = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;
};

// ∇F(z) for F(z) = ½‖Δ_w z + u‖²_{Λ_μ}, one matrix per layer slot.
// Layer l contributes Λ_{μ_l}(R_l+U_l) to its own slot and the back-coupled
// term −f̃′⊙(W_lᵀ Λ_{μ_l}(R_l+U_l)) to slot l+1.
std::vector<Mat> grad_F_z(const Architecture& arch, const ParamSet& params,
                          const SplitState& state, const Mat& x, const MuSpec& mu);

double F_value(const Architecture& arch, const ParamSet& params, const SplitState& state,
               const Mat& x, const MuSpec& mu);

struct ZStepResult {
    std::vector<Mat> zs;
    double obj_before = 0.0;  // F + L at entry
    double obj_after = 0.0;   // F + L at exit
    int accepted_steps = 0;
    double last_gamma = 0.0;
    bool prox_converged = true;
};

// z_inner forward-backward passes: explicit gradient step on F, loss prox on
// the Z₁ block, identity elsewhere. Backtracking accepts a step only on
// sufficient decrease of F + L.
ZStepResult z_step(const Mat& y, const Architecture& arch, const ParamSet& params,
                   const SplitState& state, const Mat& x, const MuSpec& mu,
                   const AdmmConfig& cfg);

struct WStepResult {
    ParamSet params;
    bool jitter_applied = false;
};

// Layer-separable minimization of φ(w̃_l) + ½ w̃_lᵀΛ_{w_l}w̃_l − w̃_lᵀd_{w_l}.
// l2/none solve the small Gram system by Cholesky; l1 runs forward-backward
// with step 1/λ_max estimated by power iteration.
WStepResult w_step(const Architecture& arch, const ParamSet& params, const SplitState& state,
                   const Mat& x, const MuSpec& mu, const PenaltySpec& pen,
                   const AdmmConfig& cfg);

// U_l ← U_l + R_l.
std::vector<Mat> u_step(const Architecture& arch, const ParamSet& params,
                        const SplitState& state, const Mat& x);

struct WarmStart {
    ParamSet params;
    SplitState state;
};

// Full outer loop. Initializes from init_params / forward_zs / U=0 unless a
// warm start is given; iterates the configured block order until both
// residuals fall below tolerance or max_outer. Throws DivergenceError on a
// non-finite objective.
FitReport fit(const Mat& y, const Mat& x, const Architecture& arch, const PenaltySpec& pen,
              const AdmmConfig& cfg, const WarmStart* warm = nullptr);

}  // namespace proxdeep
