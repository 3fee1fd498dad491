#include "proxdeep/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>
#include <vector>

#include "proxdeep/concurrency.hpp"
#include "proxdeep/rng.hpp"
#include "proxdeep/serialize.hpp"

namespace proxdeep::cli {

namespace {

namespace fs = std::filesystem;

// --- config access with field-path errors -------------------------------

const json& require_field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(path + "." + key + ": missing required field");
    }
    return j.at(key);
}

template <typename T>
T field_as(const json& j, const char* key, const std::string& path) {
    try {
        return require_field(j, key, path).get<T>();
    } catch (const json::exception&) {
        throw ParseError(path + "." + key + ": wrong type");
    }
}

template <typename T>
T field_or(const json& j, const char* key, const std::string& path, T fallback) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError(path + "." + key + ": wrong type");
    }
}

// --- config sections ------------------------------------------------------

struct DataConfig {
    std::string train_csv;
    std::string test_csv;  // empty = derive test side by splitting, if needed
    CsvSchema schema;
    bool standardize = true;
    std::optional<double> train_frac;
};

DataConfig parse_data(const json& j, const std::string& path) {
    DataConfig d;
    d.train_csv = field_as<std::string>(j, "train_csv", path);
    d.test_csv = field_or<std::string>(j, "test_csv", path, "");
    d.schema.label_col = field_as<std::string>(j, "label", path);
    d.schema.feature_cols =
        field_or<std::vector<std::string>>(j, "features", path, {});
    d.schema.header = field_or<bool>(j, "header", path, true);
    d.schema.numeric_label = field_or<bool>(j, "numeric_label", path, false);
    d.standardize = field_or<bool>(j, "standardize", path, true);
    if (j.contains("train_frac") && !j.at("train_frac").is_null()) {
        d.train_frac = field_as<double>(j, "train_frac", path);
        if (!(*d.train_frac > 0.0 && *d.train_frac < 1.0)) {
            throw ParseError(path + ".train_frac: must be in (0,1)");
        }
    }
    return d;
}

Architecture parse_arch(const json& j, const std::string& path) {
    Architecture arch;
    arch.input_dim = field_or<index_t>(j, "input_dim", path, 0);
    arch.layer_dims = field_as<std::vector<index_t>>(j, "layer_dims", path);
    for (const auto& s : field_or<std::vector<std::string>>(j, "links", path, {})) {
        arch.links.push_back(link_from_name(s));
    }
    arch.loss = loss_from_name(field_as<std::string>(j, "loss", path));
    return arch;
}

PenaltySpec parse_penalty(const json& j, const std::string& path) {
    PenaltySpec pen;
    pen.family = penalty_from_name(field_or<std::string>(j, "family", path, "none"));
    pen.gamma_w = field_or<double>(j, "gamma_w", path, 0.0);
    pen.penalize_bias = field_or<bool>(j, "penalize_bias", path, true);
    pen.validate();
    return pen;
}

AdmmConfig parse_admm(const json& j, const std::string& path, std::uint64_t seed) {
    AdmmConfig cfg;
    cfg.seed = seed;
    cfg.max_outer = field_or<int>(j, "max_outer", path, cfg.max_outer);
    cfg.z_inner = field_or<int>(j, "z_inner", path, cfg.z_inner);
    cfg.w_inner = field_or<int>(j, "w_inner", path, cfg.w_inner);
    if (j.contains("tol_primal") && !j.at("tol_primal").is_null()) {
        cfg.tol_primal = field_as<double>(j, "tol_primal", path);
    }
    if (j.contains("tol_dual") && !j.at("tol_dual").is_null()) {
        cfg.tol_dual = field_as<double>(j, "tol_dual", path);
    }
    if (j.contains("step")) {
        const json& s = j.at("step");
        const std::string policy = field_or<std::string>(s, "policy", path + ".step",
                                                         "backtracking");
        if (policy == "fixed") {
            cfg.step = StepPolicy::fixed(field_as<double>(s, "gamma", path + ".step"));
        } else if (policy == "backtracking") {
            cfg.step = StepPolicy::backtracking(
                field_or<double>(s, "beta", path + ".step", 0.5),
                field_or<double>(s, "gamma0", path + ".step", 1.0));
        } else {
            throw ParseError(path + ".step.policy: expected 'fixed' or 'backtracking'");
        }
    }
    if (j.contains("mu")) {
        if (j.at("mu").is_array()) {
            cfg.mu = field_as<std::vector<double>>(j, "mu", path);
        } else {
            cfg.mu = {field_as<double>(j, "mu", path)};
        }
    }
    const std::string order = field_or<std::string>(j, "order", path, "zwu");
    if (order == "zwu") {
        cfg.order = BlockOrder::zwu;
    } else if (order == "wzu") {
        cfg.order = BlockOrder::wzu;
    } else {
        throw ParseError(path + ".order: expected 'zwu' or 'wzu'");
    }
    cfg.mu_balancing = field_or<bool>(j, "mu_balancing", path, false);
    cfg.prox_inner = field_or<int>(j, "prox_inner", path, cfg.prox_inner);
    cfg.prox_tol = field_or<double>(j, "prox_tol", path, cfg.prox_tol);
    cfg.init_scale = field_or<double>(j, "init_scale", path, cfg.init_scale);
    cfg.validate();
    return cfg;
}

// --- shared run assembly ----------------------------------------------------

struct LoadedRun {
    json config;
    std::string out_dir;
    std::uint64_t seed = 0;
    DataConfig data_cfg;
    Dataset train;
    Dataset test;  // empty n() when not requested
    std::optional<Scaler> scaler;
    Architecture arch;
    PenaltySpec pen;
    AdmmConfig admm;
};

Mat response_of(const Dataset& ds, const Architecture& arch) {
    if (arch.loss == LossId::multinomial) {
        return one_hot(ds.labels, ds.k()).m;
    }
    return Eigen::Map<const Mat>(ds.y.data(), 1, ds.y.size());
}

LoadedRun load_run(const CliOptions& opts, bool want_test) {
    LoadedRun run;
    try {
        run.config = json::parse(read_text_file(opts.config_path));
    } catch (const json::exception& e) {
        throw ParseError("config: invalid JSON: " + std::string(e.what()));
    }
    const json& root = run.config;
    run.seed = opts.seed ? *opts.seed : field_or<std::uint64_t>(root, "seed", "config", 0);
    run.out_dir = !opts.out_dir.empty()
                      ? opts.out_dir
                      : field_or<std::string>(root, "out", "config", "out");

    run.data_cfg = parse_data(require_field(root, "data", "config"), "config.data");
    run.arch = parse_arch(require_field(root, "arch", "config"), "config.arch");
    run.pen = root.contains("penalty")
                  ? parse_penalty(root.at("penalty"), "config.penalty")
                  : PenaltySpec{};
    run.admm = parse_admm(root.contains("admm") ? root.at("admm") : json::object(),
                          "config.admm", run.seed);

    Dataset full = load_csv(run.data_cfg.train_csv, run.data_cfg.schema);
    if (!run.data_cfg.test_csv.empty()) {
        run.train = std::move(full);
        run.test = load_csv(run.data_cfg.test_csv, run.data_cfg.schema);
    } else if (run.data_cfg.train_frac) {
        auto [tr, te] = stratified_split(full, *run.data_cfg.train_frac, run.seed);
        run.train = std::move(tr);
        run.test = std::move(te);
    } else {
        if (want_test) {
            throw ParseError("config.data: need either test_csv or train_frac");
        }
        run.train = std::move(full);
    }

    if (run.data_cfg.standardize) {
        auto [scaled, sc] = standardize(run.train);
        run.train = std::move(scaled);
        run.scaler = sc;
        if (run.test.n() > 0) run.test.x = apply_scaler(*run.scaler, run.test.x);
    }

    if (run.arch.input_dim == 0) run.arch.input_dim = run.train.m();
    if (run.arch.input_dim != run.train.m()) {
        throw ParseError("config.arch.input_dim: " + std::to_string(run.arch.input_dim) +
                         " does not match data feature count " +
                         std::to_string(run.train.m()));
    }
    run.arch.validate();
    if (run.arch.loss == LossId::multinomial) {
        if (!run.train.classification) {
            throw ParseError("config: multinomial loss needs a class label column");
        }
        if (run.arch.out_dim() != run.train.k()) {
            throw ParseError("config.arch.layer_dims[0]: " +
                             std::to_string(run.arch.out_dim()) + " classes expected, data has " +
                             std::to_string(run.train.k()));
        }
    } else if (run.train.classification) {
        throw ParseError("config: squared_error loss needs numeric_label=true");
    }
    return run;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory: " + dir);
}

int report_error(std::ostream& err, const char* cmd, const std::exception& e, int code) {
    err << cmd << ": error: " << e.what() << "\n";
    return code;
}

// Exit-code mapping shared by all commands.
template <typename Fn>
int guarded(const char* cmd, std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        return report_error(err, cmd, e, kExitConfig);
    } catch (const ValueError& e) {
        return report_error(err, cmd, e, kExitConfig);
    } catch (const DimError& e) {
        return report_error(err, cmd, e, kExitConfig);
    } catch (const std::exception& e) {
        return report_error(err, cmd, e, kExitRuntime);
    }
}

}  // namespace

int cmd_fit(const CliOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.sequential) force_sequential(true);
    return guarded("fit", err, [&]() {
        LoadedRun run = load_run(opts, /*want_test=*/false);
        const Mat y = response_of(run.train, run.arch);
        const FitReport report = fit(y, run.train.x, run.arch, run.pen, run.admm);

        ensure_out_dir(run.out_dir);
        ParamsDoc doc;
        doc.arch = run.arch;
        doc.params = report.params;
        doc.scaler = run.scaler;
        doc.class_names = run.train.class_names;
        doc.feature_names = run.train.feature_names;
        write_text_file(run.out_dir + "/params.json", params_to_json(doc).dump(2) + "\n");
        write_text_file(run.out_dir + "/fit_report.json",
                        fit_report_to_json(run.arch, report).dump(2) + "\n");
        write_text_file(run.out_dir + "/trace.csv", trace_csv(report));

        const FitRecord& last = report.iterations.back();
        out << "fit: iters=" << report.iterations.size() << " converged=" << report.converged
            << " objective=" << fmt_double(last.objective)
            << " primal=" << fmt_double(last.primal_res)
            << " dual=" << fmt_double(last.dual_res)
            << " train_acc=" << fmt_double(last.train_accuracy)
            << " nonzero=" << fmt_double(report.nonzero_fraction) << "\n";
        return kExitOk;
    });
}

int cmd_path(const CliOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.sequential) force_sequential(true);
    return guarded("path", err, [&]() {
        LoadedRun run = load_run(opts, /*want_test=*/true);
        const json& root = run.config;
        const json& pj = require_field(root, "path", "config");
        PathSpec spec;
        spec.gamma_grid = field_as<std::vector<double>>(pj, "gamma_grid", "config.path");
        spec.mu_grid = field_as<std::vector<double>>(pj, "mu_grid", "config.path");
        spec.warm_start = field_or<bool>(pj, "warm_start", "config.path", true);
        const int replicates = field_or<int>(pj, "replicates", "config.path", 5);
        if (replicates < 1) throw ParseError("config.path.replicates: must be >= 1");
        spec.replicate_seeds.clear();
        for (int r = 0; r < replicates; ++r) {
            spec.replicate_seeds.push_back(
                derive_seed(run.seed, "path-rep-" + std::to_string(r)));
        }
        spec.validate();

        const Mat y_train = response_of(run.train, run.arch);
        const Mat y_test = response_of(run.test, run.arch);
        const PathReport report = run_path(y_train, run.train.x, y_test, run.test.x,
                                           run.arch, run.pen, spec, run.admm);

        ensure_out_dir(run.out_dir);
        write_text_file(run.out_dir + "/path_report.json",
                        path_report_to_json(report).dump(2) + "\n");
        write_text_file(run.out_dir + "/table2.csv", path_table_csv(report));

        int failed = 0;
        for (const PathCell& c : report.cells) failed += c.failed ? 1 : 0;
        out << "path: cells=" << report.cells.size() << " failed=" << failed << "\n";
        return kExitOk;
    });
}

int cmd_select(const CliOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.sequential) force_sequential(true);
    return guarded("select", err, [&]() {
        LoadedRun run = load_run(opts, /*want_test=*/false);
        const json& sj = require_field(run.config, "select", "config");
        const json& models = require_field(sj, "models", "config.select");
        if (!models.is_array() || models.empty()) {
            throw ParseError("config.select.models: expected a non-empty array");
        }
        SelectOptions sel;
        sel.cost_c = field_or<double>(sj, "c", "config.select", 2.0);
        const std::string mode = field_or<std::string>(sj, "df_mode", "config.select",
                                                       "jacobian");
        if (mode == "jacobian") {
            sel.df.mode = DfMode::jacobian;
        } else if (mode == "perturb") {
            sel.df.mode = DfMode::perturb;
        } else {
            throw ParseError("config.select.df_mode: expected 'jacobian' or 'perturb'");
        }
        sel.df.epsilon = field_or<double>(sj, "epsilon", "config.select", 1e-4);
        if (sj.contains("sigma2") && !sj.at("sigma2").is_null()) {
            sel.sigma2 = field_as<double>(sj, "sigma2", "config.select");
        }

        struct Entry {
            std::string name;
            SelectionReport report;
        };
        std::vector<Entry> entries;
        const Mat y = response_of(run.train, run.arch);
        for (std::size_t i = 0; i < models.size(); ++i) {
            const json& mj = models.at(i);
            const std::string where = "config.select.models[" + std::to_string(i) + "]";
            Entry e;
            e.name = field_or<std::string>(mj, "name", where, "model-" + std::to_string(i));
            Architecture arch = parse_arch(require_field(mj, "arch", where), where + ".arch");
            if (arch.input_dim == 0) arch.input_dim = run.train.m();
            arch.validate();
            if (arch.loss != run.arch.loss) {
                throw ParseError(where + ".arch.loss: all candidates must share the "
                                 "config loss so responses are comparable");
            }
            PenaltySpec pen = mj.contains("penalty")
                                  ? parse_penalty(mj.at("penalty"), where + ".penalty")
                                  : run.pen;
            AdmmConfig cfg = run.admm;
            cfg.seed = derive_seed(run.seed, "select-" + std::to_string(i));
            e.report = evaluate_model(y, run.train.x, arch, pen, cfg, sel);
            entries.push_back(std::move(e));
        }

        // Lower IC wins.
        std::vector<std::size_t> order(entries.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return entries[a].report.ic < entries[b].report.ic;
        });

        json out_models = json::array();
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            const Entry& e = entries[order[rank]];
            json m = selection_to_json(e.report);
            m["name"] = e.name;
            m["rank"] = rank;
            out_models.push_back(std::move(m));
        }
        ensure_out_dir(run.out_dir);
        write_text_file(run.out_dir + "/selection.json",
                        json{{"criterion", "ic"}, {"models", out_models}}.dump(2) + "\n");
        out << "select: models=" << entries.size()
            << " best=" << entries[order.front()].name << "\n";
        return kExitOk;
    });
}

int cmd_predict(const PredictOptions& opts, std::ostream& out, std::ostream& err) {
    if (opts.sequential) force_sequential(true);
    return guarded("predict", err, [&]() {
        json pj;
        try {
            pj = json::parse(read_text_file(opts.params_path));
        } catch (const json::exception& e) {
            throw ParseError("params: invalid JSON: " + std::string(e.what()));
        }
        const ParamsDoc doc = params_from_json(pj);

        // With stored feature names, pick those columns; otherwise every
        // column is a feature and the count must match.
        CsvSchema schema;
        schema.header = true;
        schema.feature_cols = doc.feature_names;
        const Dataset ds = load_csv(opts.data_path, schema);
        if (ds.m() != doc.arch.input_dim) {
            throw DimError("predict: data provides " + std::to_string(ds.m()) +
                           " features, params expect " +
                           std::to_string(doc.arch.input_dim));
        }

        Mat x = ds.x;
        if (doc.scaler) x = apply_scaler(*doc.scaler, x);
        const Mat output = predict_output(doc.arch, doc.params, x);

        std::ostringstream csv;
        const bool classify = doc.arch.loss == LossId::multinomial;
        if (classify) {
            for (index_t k = 0; k < output.rows(); ++k) {
                const std::string cname =
                    k < static_cast<index_t>(doc.class_names.size())
                        ? doc.class_names[static_cast<std::size_t>(k)]
                        : "class_" + std::to_string(k);
                csv << "prob_" << cname << ",";
            }
            csv << "label\n";
            for (index_t j = 0; j < output.cols(); ++j) {
                index_t best = 0;
                for (index_t k = 0; k < output.rows(); ++k) {
                    if (output(k, j) > output(best, j)) best = k;
                    csv << fmt_double(output(k, j)) << ",";
                }
                csv << (best < static_cast<index_t>(doc.class_names.size())
                            ? doc.class_names[static_cast<std::size_t>(best)]
                            : std::to_string(best))
                    << "\n";
            }
        } else {
            for (index_t k = 0; k < output.rows(); ++k) {
                csv << "pred_" << k << (k + 1 < output.rows() ? "," : "");
            }
            csv << "\n";
            for (index_t j = 0; j < output.cols(); ++j) {
                for (index_t k = 0; k < output.rows(); ++k) {
                    csv << fmt_double(output(k, j)) << (k + 1 < output.rows() ? "," : "");
                }
                csv << "\n";
            }
        }
        ensure_out_dir(opts.out_dir);
        write_text_file(opts.out_dir + "/predictions.csv", csv.str());
        out << "predict: observations=" << output.cols() << "\n";
        return kExitOk;
    });
}

}  // namespace proxdeep::cli
