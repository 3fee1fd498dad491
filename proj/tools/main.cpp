#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "proxdeep/cli.hpp"

namespace {

void add_common(CLI::App* cmd, proxdeep::cli::CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", opts.seed, "master seed (overrides config)");
    cmd->add_flag("--sequential", opts.sequential, "force sequential execution");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proxdeep: deep classifiers/regressors by ADMM variable splitting"};
    app.require_subcommand(1);

    proxdeep::cli::CliOptions fit_opts, path_opts, select_opts;
    proxdeep::cli::PredictOptions predict_opts;

    CLI::App* fit = app.add_subcommand("fit", "train one model and write artifacts");
    add_common(fit, fit_opts);

    CLI::App* path = app.add_subcommand("path", "sweep the regularization grid");
    add_common(path, path_opts);

    CLI::App* select = app.add_subcommand("select", "rank candidate architectures");
    add_common(select, select_opts);

    CLI::App* predict = app.add_subcommand("predict", "predict from saved parameters");
    predict->add_option("--params", predict_opts.params_path, "params.json from a fit")
        ->required()
        ->check(CLI::ExistingFile);
    predict->add_option("--data", predict_opts.data_path, "feature CSV")
        ->required()
        ->check(CLI::ExistingFile);
    predict->add_option("--out", predict_opts.out_dir, "output directory");
    predict->add_flag("--sequential", predict_opts.sequential, "force sequential execution");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help
        }
        app.exit(e);
        return proxdeep::cli::kExitConfig;
    }

    if (fit->parsed()) return proxdeep::cli::cmd_fit(fit_opts, std::cout, std::cerr);
    if (path->parsed()) return proxdeep::cli::cmd_path(path_opts, std::cout, std::cerr);
    if (select->parsed()) return proxdeep::cli::cmd_select(select_opts, std::cout, std::cerr);
    if (predict->parsed()) return proxdeep::cli::cmd_predict(predict_opts, std::cout, std::cerr);
    return proxdeep::cli::kExitConfig;
}
