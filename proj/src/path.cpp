#include "proxdeep/path.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "proxdeep/concurrency.hpp"
#include "proxdeep/rng.hpp"

namespace proxdeep {

void PathSpec::validate() const {
    if (gamma_grid.empty()) throw ValueError("path: gamma grid must be non-empty");
    if (mu_grid.empty()) throw ValueError("path: mu grid must be non-empty");
    if (replicate_seeds.empty()) throw ValueError("path: needs at least one replicate seed");
    for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
        if (gamma_grid[i] < 0.0) throw ValueError("path: gamma values must be nonnegative");
        if (i > 0 && gamma_grid[i] < gamma_grid[i - 1]) {
            throw ValueError("path: gamma grid must be ascending");
        }
    }
    for (double m : mu_grid) {
        if (m <= 0.0) throw ValueError("path: mu values must be positive");
    }
}

namespace {

index_t argmax_lowest(const Vec& col) {
    index_t best = 0;
    for (index_t i = 1; i < col.size(); ++i) {
        if (col[i] > col[best]) best = i;  // strict: ties keep the lowest index
    }
    return best;
}

}  // namespace

double classify_rate(const Mat& probs, const LabelsOneHot& y) {
    if (probs.rows() != y.k() || probs.cols() != y.n()) {
        throw DimError("classify_rate: " + std::to_string(probs.rows()) + "x" +
                       std::to_string(probs.cols()) + " vs labels " + std::to_string(y.k()) +
                       "x" + std::to_string(y.n()));
    }
    index_t hits = 0;
    for (index_t j = 0; j < probs.cols(); ++j) {
        if (argmax_lowest(probs.col(j)) == argmax_lowest(y.m.col(j))) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(probs.cols());
}

namespace {

struct CellSample {
    bool ok = false;
    double nonzero = 0.0;
    double train_rate = 0.0;
    double test_rate = 0.0;
    double objective = 0.0;
};

}  // namespace

PathReport run_path(const Mat& y_train, const Mat& x_train, const Mat& y_test,
                    const Mat& x_test, const Architecture& arch, const PenaltySpec& base_pen,
                    const PathSpec& spec, const AdmmConfig& cfg) {
    spec.validate();
    arch.validate();
    cfg.validate();
    const index_t n_mu = static_cast<index_t>(spec.mu_grid.size());
    const index_t n_gamma = static_cast<index_t>(spec.gamma_grid.size());
    const index_t n_rep = static_cast<index_t>(spec.replicate_seeds.size());

    const LabelsOneHot y1h_train = arch.loss == LossId::multinomial
                                       ? LabelsOneHot::from_mat(y_train)
                                       : LabelsOneHot{};
    const LabelsOneHot y1h_test = arch.loss == LossId::multinomial
                                      ? LabelsOneHot::from_mat(y_test)
                                      : LabelsOneHot{};

    // One chain per (mu row, seed): sequential in gamma with warm starts,
    // independent across chains.
    std::vector<std::vector<CellSample>> samples(
        static_cast<std::size_t>(n_mu * n_rep),
        std::vector<CellSample>(static_cast<std::size_t>(n_gamma)));

    auto run_chain = [&](int chain) {
        const index_t mi = chain / n_rep;
        const index_t ri = chain % n_rep;
        AdmmConfig chain_cfg = cfg;
        chain_cfg.mu = {spec.mu_grid[static_cast<std::size_t>(mi)]};
        chain_cfg.seed = derive_seed(spec.replicate_seeds[static_cast<std::size_t>(ri)],
                                     "path-replicate");

        WarmStart warm;
        bool have_warm = false;
        for (index_t gi = 0; gi < n_gamma; ++gi) {
            PenaltySpec pen = base_pen;
            pen.gamma_w = spec.gamma_grid[static_cast<std::size_t>(gi)];
            CellSample& cell = samples[static_cast<std::size_t>(chain)]
                                      [static_cast<std::size_t>(gi)];
            try {
                FitReport rep = fit(y_train, x_train, arch, pen, chain_cfg,
                                    (spec.warm_start && have_warm) ? &warm : nullptr);
                cell.ok = true;
                cell.nonzero = rep.nonzero_fraction;
                cell.objective = rep.iterations.back().objective;
                if (arch.loss == LossId::multinomial) {
                    cell.train_rate = classify_rate(
                        predict_output(arch, rep.params, x_train), y1h_train);
                    cell.test_rate = classify_rate(
                        predict_output(arch, rep.params, x_test), y1h_test);
                }
                if (spec.warm_start) {
                    warm.params = rep.params;
                    warm.state = rep.state;
                    have_warm = true;
                }
            } catch (const DivergenceError&) {
                cell.ok = false;
                have_warm = false;  // cold-start the next gamma cell
            } catch (const NumericalError&) {
                cell.ok = false;
                have_warm = false;
            }
        }
    };

    run_indexed(static_cast<int>(n_mu * n_rep), run_chain);

    PathReport report;
    report.cells.reserve(static_cast<std::size_t>(n_mu * n_gamma));
    for (index_t mi = 0; mi < n_mu; ++mi) {
        for (index_t gi = 0; gi < n_gamma; ++gi) {
            PathCell cell;
            cell.mu = spec.mu_grid[static_cast<std::size_t>(mi)];
            cell.gamma_w = spec.gamma_grid[static_cast<std::size_t>(gi)];
            for (index_t ri = 0; ri < n_rep; ++ri) {
                const CellSample& s = samples[static_cast<std::size_t>(mi * n_rep + ri)]
                                             [static_cast<std::size_t>(gi)];
                if (!s.ok) continue;
                ++cell.replicates_ok;
                cell.nonzero_fraction += s.nonzero;
                cell.train_rate += s.train_rate;
                cell.test_rate += s.test_rate;
                cell.objective += s.objective;
            }
            if (cell.replicates_ok > 0) {
                const double d = cell.replicates_ok;
                cell.nonzero_fraction /= d;
                cell.train_rate /= d;
                cell.test_rate /= d;
                cell.objective /= d;
            } else {
                cell.failed = true;
            }
            report.cells.push_back(cell);
        }
    }
    return report;
}

}  // namespace proxdeep
