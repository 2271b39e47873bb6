#include "boolkern/experiment.hpp"

#include "boolkern/gram.hpp"
#include "boolkern/parallel.hpp"
#include "boolkern/spectral.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace boolkern {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        auto piece = trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (!piece.empty()) out.push_back(piece);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_integer(std::string_view text, std::string_view what) {
    T value{};
    text = trim(text);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(fmt::format("{}: expected an integer, got '{}'", what, text));
    }
    return value;
}

double parse_real(std::string_view text, std::string_view what) {
    double value = 0.0;
    text = trim(text);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(fmt::format("{}: expected a number, got '{}'", what, text));
    }
    return value;
}

bool parse_bool(std::string_view text, std::string_view what) {
    std::string v(trim(text));
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", what, text));
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
    std::filesystem::path p{std::string(trim(value))};
    return p.is_relative() && !base.empty() ? base / p : p;
}

std::string arity_cell(const KernelSpec& spec) {
    return uses_arity(spec.family) ? std::to_string(spec.arity) : std::string();
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void log_line(const RunOptions& options, const std::string& message) {
    if (options.log) *options.log << message << '\n' << std::flush;
}

std::filesystem::path output_dir(const ExperimentConfig& config, const RunOptions& options) {
    auto dir = options.out_dir.value_or(config.output.dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::uint64_t budget_bytes(const OutputConfig& out) {
    return static_cast<std::uint64_t>(out.memory_budget_gb * 1024.0 * 1024.0 * 1024.0);
}

}  // namespace

std::vector<std::uint32_t> parse_arity_list(std::string_view text) {
    std::vector<std::uint32_t> out;
    for (auto piece : split(text, ',')) {
        std::uint32_t step = 1;
        if (const auto colon = piece.find(':'); colon != std::string_view::npos) {
            step = parse_integer<std::uint32_t>(piece.substr(colon + 1), "arity step");
            piece = trim(piece.substr(0, colon));
            if (step == 0) throw ConfigError("arity step must be positive");
        }
        std::uint32_t lo = 0;
        std::uint32_t hi = 0;
        if (const auto dash = piece.find('-'); dash != std::string_view::npos) {
            lo = parse_integer<std::uint32_t>(piece.substr(0, dash), "arity range");
            hi = parse_integer<std::uint32_t>(piece.substr(dash + 1), "arity range");
        } else {
            lo = hi = parse_integer<std::uint32_t>(piece, "arity");
        }
        if (lo == 0) throw ConfigError("arities must be at least 1");
        if (hi < lo) throw ConfigError(fmt::format("descending arity range '{}'", piece));
        for (std::uint32_t d = lo; d <= hi; d += step) out.push_back(d);
    }
    return out;
}

std::vector<KernelSpec> KernelSweep::specs() const {
    std::vector<KernelSpec> out;
    for (auto family : families) {
        if (family == KernelFamily::Conjunctive || family == KernelFamily::Disjunctive) {
            const auto& arities = family == KernelFamily::Conjunctive ? conjunctive_arities : disjunctive_arities;
            for (auto d : arities) out.push_back({family, d, normalized});
        } else {
            out.push_back({family, 1, normalized});
        }
    }
    return out;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
    }

    ExperimentConfig cfg;
    std::optional<std::vector<std::uint32_t>> both_arities;
    for (const auto& [section, entries] : tree) {
        if (!entries.data().empty()) throw ConfigError(fmt::format("key '{}' outside of a section", section));
        for (const auto& [key, node] : entries) {
            const std::string& value = node.data();
            const std::string where = section + "." + key;
            auto unknown = [&] { return ConfigError(fmt::format("unknown config key '{}'", where)); };
            try {

                if (section == "dataset") {
                    if (key == "name") cfg.dataset.name = std::string(trim(value));
                    else if (key == "path") cfg.dataset.path = resolve(base_dir, value);
                    else if (key == "format") cfg.dataset.load.format = parse_input_format(trim(value));
                    else if (key == "binarize") {
                        const auto v = trim(value);
                        if (v == "positive") cfg.dataset.load.binarize = Binarize::Positive;
                        else if (v == "any") cfg.dataset.load.binarize = Binarize::Any;
                        else throw ConfigError(fmt::format("{}: expected 'positive' or 'any'", where));
                    }
                    else if (key == "max_user_ratings") cfg.dataset.max_user_ratings = parse_integer<std::size_t>(value, where);
                    else if (key == "expected_users") cfg.dataset.expected_users = parse_integer<std::size_t>(value, where);
                    else if (key == "expected_items") cfg.dataset.expected_items = parse_integer<std::size_t>(value, where);
                    else if (key == "expected_ratings") cfg.dataset.expected_ratings = parse_integer<std::size_t>(value, where);
                    else throw unknown();
                } else if (section == "kernels") {
                    if (key == "families") {
                        cfg.kernels.families.clear();
                        for (auto name : split(value, ',')) cfg.kernels.families.push_back(parse_family(name));
                    }
                    else if (key == "arities") both_arities = parse_arity_list(value);
                    else if (key == "conjunctive_arities") cfg.kernels.conjunctive_arities = parse_arity_list(value);
                    else if (key == "disjunctive_arities") cfg.kernels.disjunctive_arities = parse_arity_list(value);
                    else if (key == "normalized") cfg.kernels.normalized = parse_bool(value, where);
                    else throw unknown();
                } else if (section == "ranker") {
                    if (key == "lambda_p") cfg.ranker.lambda_p = parse_real(value, where);
                    else if (key == "max_iters") cfg.ranker.max_iters = parse_integer<std::size_t>(value, where);
                    else if (key == "tol") cfg.ranker.tol = parse_real(value, where);
                    else throw unknown();
                } else if (section == "eval") {
                    if (key == "folds") cfg.eval.folds = parse_integer<std::size_t>(value, where);
                    else if (key == "seed") cfg.eval.seed = parse_integer<std::uint64_t>(value, where);
                    else if (key == "min_train") cfg.eval.min_train = parse_integer<std::size_t>(value, where);
                    else if (key == "k") cfg.eval.metrics.k = parse_integer<std::size_t>(value, where);
                    else if (key == "tie_half_credit") cfg.eval.metrics.tie_half_credit = parse_bool(value, where);
                    else throw unknown();
                } else if (section == "output") {
                    if (key == "dir") cfg.output.dir = resolve(base_dir, value);
                    else if (key == "manifest") cfg.output.manifest = parse_bool(value, where);
                    else if (key == "memory_budget_gb") cfg.output.memory_budget_gb = parse_real(value, where);
                    else throw unknown();
                } else {
                    throw ConfigError(fmt::format("unknown config section '{}'", section));
                }
            } catch (const std::invalid_argument& e) {
                throw ConfigError(fmt::format("{}: {}", where, e.what()));
            }
        }
    }
    // The family-specific lists win over the shared one.
    if (both_arities) {
        const bool conj_set = tree.get_child_optional("kernels.conjunctive_arities").has_value();
        const bool disj_set = tree.get_child_optional("kernels.disjunctive_arities").has_value();
        if (!conj_set) cfg.kernels.conjunctive_arities = *both_arities;
        if (!disj_set) cfg.kernels.disjunctive_arities = *both_arities;
    }

    try {
        cfg.ranker.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.eval.folds < 2) throw ConfigError("eval.folds must be at least 2");
    if (cfg.eval.metrics.k == 0) throw ConfigError("eval.k must be positive");
    if (!(cfg.output.memory_budget_gb > 0.0)) throw ConfigError("output.memory_budget_gb must be positive");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    return parse_config(in, path.parent_path());
}

BinaryInteractionMatrix prepare_dataset(const ExperimentConfig& config) {
    if (config.dataset.path.empty()) throw ConfigError("dataset.path is not set");
    if (!std::filesystem::exists(config.dataset.path)) {
        throw ConfigError("dataset file '" + config.dataset.path.string() + "' does not exist");
    }
    auto data = load_interactions(config.dataset.path, config.dataset.load);
    if (config.dataset.max_user_ratings > 0) data = filter_max_ratings(data, config.dataset.max_user_ratings);
    for (const auto& spec : config.kernels.specs()) {
        try {
            spec.validate(data.user_count());
        } catch (const std::domain_error& e) {
            throw ConfigError(e.what());
        }
    }
    try {
        check_memory_budget(data.item_count(), budget_bytes(config.output));
    } catch (const std::length_error& e) {
        throw ConfigError(e.what());
    }
    return data;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    if (config.kernels.families.empty()) {
        log_line(options, "warning: no kernel families configured; nothing to run");
        return {};
    }
    return run_experiment(prepare_dataset(config), config, options);
}

std::vector<ExperimentRow> run_experiment(const BinaryInteractionMatrix& data, const ExperimentConfig& config,
                                          const RunOptions& options) {
    const auto specs = config.kernels.specs();
    if (specs.empty()) {
        log_line(options, "warning: no kernel families configured; nothing to run");
        return {};
    }
    for (const auto& spec : specs) {
        try {
            spec.validate(data.user_count());
        } catch (const std::domain_error& e) {
            throw ConfigError(e.what());
        }
    }
    config.ranker.validate();
    check_memory_budget(data.item_count(), budget_bytes(config.output));
    if (options.workers > 0) set_worker_count(options.workers);

    const auto seed = options.seed.value_or(config.eval.seed);
    const auto dir = output_dir(config, options);
    const FoldPlan plan(data, seed, FoldOptions{config.eval.folds, config.eval.min_train});
    if (config.output.manifest) {
        auto out = open_output(dir / "folds_manifest.csv");
        plan.write_manifest(out);
    }

    std::vector<ExperimentRow> rows(specs.size());
    std::vector<std::vector<FoldMetrics>> fold_metrics(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        rows[s].dataset = config.dataset.name;
        rows[s].spec = specs[s];
    }

    for (std::size_t t = 0; t < plan.fold_count(); ++t) {
        const auto fold = plan.fold(t);
        const OverlapMatrix overlaps(fold.train);
        const auto train_by_user = fold.train.user_rows();
        log_line(options, fmt::format("fold {}: {} train interactions, {} test users, {} test interactions", t,
                                      fold.train.interaction_count(), fold.test_users.size(),
                                      fold.test_interaction_count()));

        for (std::size_t s = 0; s < specs.size(); ++s) {
            const auto fold_start = Clock::now();
            const auto kernel = gram(overlaps, specs[s]);
            const double gram_seconds = seconds_since(fold_start);
            const auto q = compute_q(kernel);
            const auto scores = score_users(kernel, q, train_by_user, fold.test_users, config.ranker);

            FoldAccumulator acc;
            for (std::size_t k = 0; k < fold.test_users.size(); ++k) {
                const Index u = fold.test_users[k];
                acc.add(evaluate_user(fold.test_items[u], train_by_user[u], scores[k], config.eval.metrics));
            }
            const auto metrics = acc.result();
            fold_metrics[s].push_back(metrics);
            rows[s].gram_seconds.push_back(gram_seconds);
            rows[s].fold_seconds.push_back(seconds_since(fold_start));
            log_line(options, fmt::format("  {:<18} auc={:.4f} map@{}={:.4f} ndcg@{}={:.4f} ({:.2f}s)",
                                          specs[s].label(), metrics.auc, config.eval.metrics.k, metrics.map,
                                          config.eval.metrics.k, metrics.ndcg, rows[s].fold_seconds.back()));
        }
    }

    for (std::size_t s = 0; s < specs.size(); ++s) {
        rows[s].report = aggregate(fold_metrics[s]);
        for (double v : rows[s].fold_seconds) rows[s].wall_seconds += v;
    }

    const auto k = config.eval.metrics.k;
    {
        auto out = open_output(dir / "results.csv");
        fmt::print(out, "dataset,family,arity,auc_mean,auc_std,map{0}_mean,map{0}_std,ndcg{0}_mean,ndcg{0}_std,"
                        "wall_seconds\n", k);
        for (const auto& r : rows) {
            fmt::print(out, "{},{},{},{:.10f},{:.10f},{:.10f},{:.10f},{:.10f},{:.10f},{:.3f}\n", r.dataset,
                       to_string(r.spec.family), arity_cell(r.spec), r.report.auc.mean, r.report.auc.std,
                       r.report.map.mean, r.report.map.std, r.report.ndcg.mean, r.report.ndcg.std, r.wall_seconds);
        }
    }
    {
        auto out = open_output(dir / "folds.csv");
        fmt::print(out, "dataset,family,arity,fold,auc,map{0},ndcg{0},users_evaluated,users_skipped,gram_seconds,"
                        "fold_seconds\n", k);
        for (const auto& r : rows) {
            for (std::size_t t = 0; t < r.report.folds.size(); ++t) {
                const auto& f = r.report.folds[t];
                fmt::print(out, "{},{},{},{},{:.17g},{:.17g},{:.17g},{},{},{:.3f},{:.3f}\n", r.dataset,
                           to_string(r.spec.family), arity_cell(r.spec), t, f.auc, f.map, f.ndcg, f.users_evaluated,
                           f.users_skipped, r.gram_seconds[t], r.fold_seconds[t]);
            }
        }
    }
    for (auto family : {KernelFamily::Conjunctive, KernelFamily::Disjunctive}) {
        if (std::find(config.kernels.families.begin(), config.kernels.families.end(), family) ==
            config.kernels.families.end()) {
            continue;
        }
        auto out = open_output(dir / fmt::format("curve_{}.csv", to_string(family)));
        fmt::print(out, "arity,auc_mean,auc_std,map{0}_mean,ndcg{0}_mean\n", k);
        for (const auto& r : rows) {
            if (r.spec.family != family) continue;
            fmt::print(out, "{},{:.10f},{:.10f},{:.10f},{:.10f}\n", r.spec.arity, r.report.auc.mean,
                       r.report.auc.std, r.report.map.mean, r.report.ndcg.mean);
        }
    }
    return rows;
}

std::vector<SpectralRow> run_spectral(const ExperimentConfig& config, const RunOptions& options) {
    if (config.kernels.families.empty()) {
        log_line(options, "warning: no kernel families configured; nothing to run");
        return {};
    }
    return run_spectral(prepare_dataset(config), config, options);
}

std::vector<SpectralRow> run_spectral(const BinaryInteractionMatrix& data, const ExperimentConfig& config,
                                      const RunOptions& options) {
    const auto& families = config.kernels.families;
    if (families.empty()) {
        log_line(options, "warning: no kernel families configured; nothing to run");
        return {};
    }
    check_memory_budget(data.item_count(), budget_bytes(config.output));
    if (options.workers > 0) set_worker_count(options.workers);

    std::vector<KernelSpec> specs;
    for (auto family : families) {
        if (!uses_arity(family)) {
            specs.push_back({family, 1, true});
            continue;
        }
        auto arities = family == KernelFamily::Conjunctive ? config.kernels.conjunctive_arities
                                                           : config.kernels.disjunctive_arities;
        arities.push_back(1);
        std::sort(arities.begin(), arities.end());
        arities.erase(std::unique(arities.begin(), arities.end()), arities.end());
        for (auto d : arities) specs.push_back({family, d, true});
        if (family == KernelFamily::Conjunctive &&
            std::find(families.begin(), families.end(), KernelFamily::MDNF) == families.end()) {
            specs.push_back({KernelFamily::MDNF, 1, true});
        }
    }
    for (const auto& spec : specs) {
        try {
            spec.validate(data.user_count());
        } catch (const std::domain_error& e) {
            throw ConfigError(e.what());
        }
    }

    const auto dir = output_dir(config, options);
    const OverlapMatrix overlaps(data);
    std::vector<SpectralRow> rows;
    for (const auto& spec : specs) {
        const auto start = Clock::now();
        const auto kernel = gram(overlaps, spec);
        const double gram_seconds = seconds_since(start);
        rows.push_back({config.dataset.name, spec, normalized_spectral_ratio(kernel), gram_seconds});
        log_line(options, fmt::format("  {:<18} normalized spectral ratio {:.6f} (gram {:.2f}s)", spec.label(),
                                      rows.back().normalized_spectral_ratio, gram_seconds));
    }

    {
        auto out = open_output(dir / "spectral.csv");
        out << "dataset,family,arity,normalized_spectral_ratio\n";
        for (const auto& r : rows) {
            fmt::print(out, "{},{},{},{:.12f}\n", r.dataset, to_string(r.spec.family), arity_cell(r.spec),
                       r.normalized_spectral_ratio);
        }
    }
    {
        auto out = open_output(dir / "spectral_timing.csv");
        out << "dataset,family,arity,gram_seconds\n";
        for (const auto& r : rows) {
            fmt::print(out, "{},{},{},{:.3f}\n", r.dataset, to_string(r.spec.family), arity_cell(r.spec),
                       r.gram_seconds);
        }
    }
    return rows;
}

DatasetStats dataset_stats(const BinaryInteractionMatrix& x) {
    return {x.user_count(), x.item_count(), x.interaction_count(), x.density()};
}

bool report_dataset_stats(const DatasetStats& stats, const DatasetConfig& dataset, std::ostream& out) {
    fmt::print(out, "dataset  {}\nusers    {}\nitems    {}\nratings  {}\ndensity  {:.4f}%\n", dataset.name,
               stats.users, stats.items, stats.ratings, 100.0 * stats.density);
    bool ok = true;
    auto check = [&](std::string_view what, const std::optional<std::size_t>& expected, std::size_t actual) {
        if (!expected) return;
        const bool match = *expected == actual;
        ok = ok && match;
        fmt::print(out, "expected {:<8} {} -> {}\n", what, *expected, match ? "match" : "MISMATCH");
    };
    check("users", dataset.expected_users, stats.users);
    check("items", dataset.expected_items, stats.items);
    check("ratings", dataset.expected_ratings, stats.ratings);
    return ok;
}

}  // namespace boolkern
