#pragma once

#include <cstdint>
#include <vector>

#include "proxdeep/admm.hpp"

namespace proxdeep {

struct PathSpec {
    std::vector<double> gamma_grid;  // ascending, nonnegative
    std::vector<double> mu_grid;     // positive
    bool warm_start = true;
    std::vector<std::uint64_t> replicate_seeds = {0, 1, 2, 3, 4};

    void validate() const;
};

// One (μ, γ_w) grid cell, means over the replicates that finished.
struct PathCell {
    double mu = 0.0;
    double gamma_w = 0.0;
    double nonzero_fraction = 0.0;
    double train_rate = 0.0;
    double test_rate = 0.0;
    double objective = 0.0;
    int replicates_ok = 0;
    bool failed = false;  // every replicate diverged
};

struct PathReport {
    std::vector<PathCell> cells;  // μ-major, γ ascending within each μ row
};

// Fraction of columns whose argmax matches; ties break toward the lowest
// class index.
double classify_rate(const Mat& probs, const LabelsOneHot& y);

// Sweeps the (μ, γ_w) grid with one fit chain per (μ row, seed). Within a
// chain the fits warm-start from the previous γ cell; chains are
// independent and may run on parallel workers.
PathReport run_path(const Mat& y_train, const Mat& x_train, const Mat& y_test,
                    const Mat& x_test, const Architecture& arch, const PenaltySpec& base_pen,
                    const PathSpec& spec, const AdmmConfig& cfg);

}  // namespace proxdeep
