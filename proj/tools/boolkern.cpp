// Command line front end: dataset statistics, AUC/mAP/nDCG experiments and
// spectral ratio sweeps, all driven by an INI config.

#include "boolkern/experiment.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    int workers = 0;
    bool quiet = false;
};

void add_common(CLI::App& cmd, Common& c, bool config_required) {
    auto* opt = cmd.add_option("--config", c.config, "INI config file")->check(CLI::ExistingFile);
    if (config_required) opt->required();
    cmd.add_option("--seed", c.seed, "Override eval.seed");
    cmd.add_option("--workers", c.workers, "Cap on worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
    cmd.add_option("--out", c.out, "Override output.dir");
    cmd.add_flag("-q,--quiet", c.quiet, "Suppress progress output");
}

boolkern::RunOptions run_options(const Common& c) {
    boolkern::RunOptions opts;
    opts.seed = c.seed;
    if (c.out) opts.out_dir = *c.out;
    opts.workers = c.workers;
    opts.log = c.quiet ? nullptr : &std::cerr;
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boolean kernels for one-class collaborative filtering"};
    app.require_subcommand(1);

    Common stats_opts;
    std::string data_path;
    std::string format = "auto";
    std::string binarize = "positive";
    std::size_t max_user_ratings = 0;
    auto* stats = app.add_subcommand("stats", "Print users, items, ratings and density of a dataset");
    add_common(*stats, stats_opts, false);
    stats->add_option("--data", data_path, "Ratings file (overrides dataset.path)")->check(CLI::ExistingFile);
    stats->add_option("--format", format, "auto, tsv, csv, whitespace or double_colon");
    stats->add_option("--binarize", binarize, "positive or any")->check(CLI::IsMember({"positive", "any"}));
    stats->add_option("--max-user-ratings", max_user_ratings, "Drop users with more interactions than this");

    Common exp_opts;
    auto* experiment = app.add_subcommand("experiment", "Run the fold protocol for every configured kernel");
    add_common(*experiment, exp_opts, true);

    Common spec_opts;
    auto* spectral = app.add_subcommand("spectral", "Normalized spectral ratio of every configured kernel");
    add_common(*spectral, spec_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (stats->parsed()) {
            if (stats_opts.config.empty() && data_path.empty()) {
                std::cerr << "stats: give --config or --data\n";
                return 2;
            }
            auto cfg = stats_opts.config.empty() ? boolkern::ExperimentConfig{}
                                                 : boolkern::load_config(stats_opts.config);
            if (!data_path.empty()) {
                cfg.dataset.path = data_path;
                cfg.dataset.load.format = boolkern::parse_input_format(format);
                cfg.dataset.load.binarize =
                    binarize == "any" ? boolkern::Binarize::Any : boolkern::Binarize::Positive;
                cfg.dataset.name = std::filesystem::path(data_path).stem().string();
            }
            if (stats->count("--max-user-ratings")) cfg.dataset.max_user_ratings = max_user_ratings;
            auto data = boolkern::load_interactions(cfg.dataset.path, cfg.dataset.load);
            if (cfg.dataset.max_user_ratings > 0) {
                data = boolkern::filter_max_ratings(data, cfg.dataset.max_user_ratings);
            }
            const bool ok = boolkern::report_dataset_stats(boolkern::dataset_stats(data), cfg.dataset, std::cout);
            return ok ? 0 : 1;
        }
        if (experiment->parsed()) {
            const auto cfg = boolkern::load_config(exp_opts.config);
            const auto rows = boolkern::run_experiment(cfg, run_options(exp_opts));
            for (const auto& r : rows) {
                fmt::print("{:<18} auc {:.4f} +- {:.4f}  map@{} {:.4f}  ndcg@{} {:.4f}\n", r.spec.label(),
                           r.report.auc.mean, r.report.auc.std, cfg.eval.metrics.k, r.report.map.mean,
                           cfg.eval.metrics.k, r.report.ndcg.mean);
            }
            return 0;
        }
        if (spectral->parsed()) {
            const auto cfg = boolkern::load_config(spec_opts.config);
            const auto rows = boolkern::run_spectral(cfg, run_options(spec_opts));
            for (const auto& r : rows) {
                fmt::print("{:<18} {:.6f}\n", r.spec.label(), r.normalized_spectral_ratio);
            }
            return 0;
        }
    } catch (const boolkern::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
