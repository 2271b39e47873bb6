#include "support.hpp"

#include "boolkern/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

using namespace boolkern;

namespace {

ExperimentConfig parse_text(const std::string& text, const std::filesystem::path& base = {}) {
    std::istringstream in(text);
    return parse_config(in, base);
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
    std::istringstream in(testing::read_file(p));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

/// CSV text with the trailing `timing_columns` columns dropped.
std::string without_timing(const std::filesystem::path& p, std::size_t timing_columns) {
    std::string out;
    for (auto row : read_csv(p)) {
        row.resize(row.size() - timing_columns);
        for (const auto& c : row) out += c + ",";
        out += "\n";
    }
    return out;
}

struct Fixture {
    std::filesystem::path dir;
    ExperimentConfig cfg;

    explicit Fixture(const std::string& name, std::uint64_t seed = 3) : dir(testing::scratch_dir(name)) {
        testing::write_file(dir / "ratings.tsv", testing::clustered_ratings(seed, 120, 60, 4));
        cfg = parse_text(R"(
[dataset]
name = synthetic
path = ratings.tsv
[kernels]
families = linear, conjunctive, disjunctive, tanimoto, mdnf
arities = 1-3
[eval]
seed = 11
[output]
dir = out
)", dir);
    }
};

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("arity lists") {
    CHECK(parse_arity_list("1-5") == std::vector<std::uint32_t>{1, 2, 3, 4, 5});
    CHECK(parse_arity_list("1,2,38") == std::vector<std::uint32_t>{1, 2, 38});
    CHECK(parse_arity_list("2-10:4") == std::vector<std::uint32_t>{2, 6, 10});
    CHECK(parse_arity_list(" 1, 3-4 ,10-30:10") == std::vector<std::uint32_t>{1, 3, 4, 10, 20, 30});
    CHECK(parse_arity_list("").empty());
    CHECK_THROWS_AS(parse_arity_list("0-3"), ConfigError);
    CHECK_THROWS_AS(parse_arity_list("5-2"), ConfigError);
    CHECK_THROWS_AS(parse_arity_list("a"), ConfigError);
    CHECK_THROWS_AS(parse_arity_list("1-4:0"), ConfigError);
}

TEST_CASE("config parsing") {
    const auto cfg = parse_text(R"(
[dataset]
name = jester
path = data/jester.csv
format = csv
binarize = any
max_user_ratings = 90
expected_users = 10
[kernels]
families = disjunctive, c-kernel
arities = 1-3
disjunctive_arities = 1,2,38
normalized = yes
[ranker]
lambda_p = 0.2
max_iters = 50
tol = 1e-6
[eval]
folds = 4
seed = 9
min_train = 3
k = 5
tie_half_credit = true
[output]
dir = res
manifest = false
memory_budget_gb = 1.5
)", "/base");
    CHECK(cfg.dataset.name == "jester");
    CHECK(cfg.dataset.path == std::filesystem::path("/base/data/jester.csv"));
    CHECK(cfg.dataset.load.format == InputFormat::Csv);
    CHECK(cfg.dataset.load.binarize == Binarize::Any);
    CHECK(cfg.dataset.max_user_ratings == 90);
    CHECK(cfg.dataset.expected_users == 10u);
    CHECK_FALSE(cfg.dataset.expected_items.has_value());
    CHECK(cfg.kernels.families == std::vector<KernelFamily>{KernelFamily::Disjunctive, KernelFamily::Conjunctive});
    CHECK(cfg.kernels.conjunctive_arities == std::vector<std::uint32_t>{1, 2, 3});
    CHECK(cfg.kernels.disjunctive_arities == std::vector<std::uint32_t>{1, 2, 38});
    CHECK(cfg.ranker.lambda_p == 0.2);
    CHECK(cfg.ranker.max_iters == 50);
    CHECK(cfg.eval.folds == 4);
    CHECK(cfg.eval.seed == 9);
    CHECK(cfg.eval.min_train == 3);
    CHECK(cfg.eval.metrics.k == 5);
    CHECK(cfg.eval.metrics.tie_half_credit);
    CHECK(cfg.output.dir == std::filesystem::path("/base/res"));
    CHECK_FALSE(cfg.output.manifest);
    CHECK(cfg.output.memory_budget_gb == 1.5);

    const auto specs = cfg.kernels.specs();
    REQUIRE(specs.size() == 6);
    CHECK(specs[2] == KernelSpec{KernelFamily::Disjunctive, 38, true});
    CHECK(specs[3] == KernelSpec{KernelFamily::Conjunctive, 1, true});
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_text("[dataset]\ncolour = blue\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[plot]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[kernels]\nfamilies = polynomial\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[kernels]\narities = 3-1\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[ranker]\nlambda_p = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[eval]\nfolds = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[eval]\nseed = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[dataset]\nformat = xml\n"), ConfigError);
    CHECK_THROWS_AS(parse_text("[dataset\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent.ini"), ConfigError);
}

TEST_CASE("errors surface before any compute") {
    Fixture f("early_errors");
    auto cfg = f.cfg;
    cfg.kernels.disjunctive_arities = {1, 5000};
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    CHECK_FALSE(std::filesystem::exists(f.dir / "out"));

    cfg = f.cfg;
    cfg.dataset.path = f.dir / "missing.tsv";
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    CHECK_THROWS_AS(run_spectral(cfg), ConfigError);

    cfg = f.cfg;
    cfg.output.memory_budget_gb = 1e-9;
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("empty kernel list is a warned no-op") {
    Fixture f("empty_kernels");
    auto cfg = f.cfg;
    cfg.kernels.families.clear();
    std::ostringstream log;
    RunOptions opts;
    opts.log = &log;
    CHECK(run_experiment(cfg, opts).empty());
    CHECK(run_spectral(cfg, opts).empty());
    CHECK(log.str().find("warning") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(f.dir / "out" / "results.csv"));
}

TEST_CASE("experiment outputs") {
    Fixture f("outputs");
    const auto rows = run_experiment(f.cfg);
    REQUIRE(rows.size() == 9);
    const auto out = f.dir / "out";
    for (auto name : {"results.csv", "folds.csv", "curve_conjunctive.csv", "curve_disjunctive.csv",
                      "folds_manifest.csv"}) {
        CHECK(std::filesystem::exists(out / name));
    }

    const auto results = read_csv(out / "results.csv");
    REQUIRE(results.size() == 10);
    CHECK(results[0] == std::vector<std::string>{"dataset", "family", "arity", "auc_mean", "auc_std", "map10_mean",
                                                 "map10_std", "ndcg10_mean", "ndcg10_std", "wall_seconds"});
    CHECK(results[1][1] == "linear");
    CHECK(results[1][2].empty());
    CHECK(results[3][1] == "conjunctive");
    CHECK(results[3][2] == "2");

    // Planted clusters make the ranking far better than chance.
    for (const auto& r : rows) CHECK(r.report.auc.mean > 0.7);

    const auto curve = read_csv(out / "curve_disjunctive.csv");
    REQUIRE(curve.size() == 4);
    CHECK(curve[3][0] == "3");
}

TEST_CASE("means and deviations reproduce from the per-fold file") {
    Fixture f("reproduce");
    run_experiment(f.cfg);
    const auto folds = read_csv(f.dir / "out" / "folds.csv");
    const auto results = read_csv(f.dir / "out" / "results.csv");
    std::map<std::string, std::vector<std::vector<double>>> per_key;
    for (std::size_t i = 1; i < folds.size(); ++i) {
        const auto& r = folds[i];
        per_key[r[1] + "/" + r[2]].push_back({std::stod(r[4]), std::stod(r[5]), std::stod(r[6])});
    }
    for (std::size_t i = 1; i < results.size(); ++i) {
        const auto& r = results[i];
        const auto& values = per_key.at(r[1] + "/" + r[2]);
        REQUIRE(values.size() == 5);
        for (std::size_t metric = 0; metric < 3; ++metric) {
            double mean = 0.0;
            for (const auto& v : values) mean += v[metric];
            mean /= 5.0;
            double var = 0.0;
            for (const auto& v : values) var += (v[metric] - mean) * (v[metric] - mean);
            const double sd = std::sqrt(var / 5.0);
            // results.csv carries ten decimals.
            CHECK(std::abs(std::stod(r[3 + 2 * metric]) - mean) <= 6e-11);
            CHECK(std::abs(std::stod(r[4 + 2 * metric]) - sd) <= 6e-11);
        }
    }
}

TEST_CASE("degree one agrees with the linear kernel on every fold") {
    Fixture f("degree_one");
    const auto rows = run_experiment(f.cfg);
    const auto& lin = rows[0].report.auc.per_fold;
    CHECK(rows[1].spec == KernelSpec{KernelFamily::Conjunctive, 1, true});
    CHECK(rows[4].spec == KernelSpec{KernelFamily::Disjunctive, 1, true});
    CHECK(rows[1].report.auc.per_fold == lin);
    CHECK(rows[4].report.auc.per_fold == lin);
}

TEST_CASE("fixed seed reproduces every output byte for byte") {
    Fixture f("determinism");
    RunOptions a;
    a.out_dir = f.dir / "a";
    RunOptions b;
    b.out_dir = f.dir / "b";
    b.workers = 1;
    run_experiment(f.cfg, a);
    run_experiment(f.cfg, b);
    run_spectral(f.cfg, a);
    run_spectral(f.cfg, b);
    CHECK(without_timing(f.dir / "a" / "results.csv", 1) == without_timing(f.dir / "b" / "results.csv", 1));
    CHECK(without_timing(f.dir / "a" / "folds.csv", 2) == without_timing(f.dir / "b" / "folds.csv", 2));
    for (auto name : {"curve_conjunctive.csv", "curve_disjunctive.csv", "folds_manifest.csv", "spectral.csv"}) {
        CHECK(testing::read_file(f.dir / "a" / name) == testing::read_file(f.dir / "b" / name));
    }

    RunOptions c;
    c.out_dir = f.dir / "c";
    c.seed = 12;
    run_experiment(f.cfg, c);
    CHECK(testing::read_file(f.dir / "a" / "folds_manifest.csv") !=
          testing::read_file(f.dir / "c" / "folds_manifest.csv"));
}

TEST_CASE("spectral sweep") {
    Fixture f("spectral");
    auto cfg = f.cfg;
    cfg.kernels.families = {KernelFamily::Conjunctive, KernelFamily::Disjunctive};
    cfg.kernels.conjunctive_arities = {2, 3};
    cfg.kernels.disjunctive_arities = parse_arity_list("2-12");
    const auto rows = run_spectral(cfg);
    // Arity 1 is added to both sweeps, plus the mDNF point.
    REQUIRE(rows.size() == 3 + 1 + 12);
    CHECK(rows[0].spec == KernelSpec{KernelFamily::Conjunctive, 1, true});
    CHECK(rows[3].spec.family == KernelFamily::MDNF);
    for (std::size_t i = 5; i < rows.size(); ++i) {
        CHECK(rows[i].normalized_spectral_ratio <= rows[i - 1].normalized_spectral_ratio + 1e-9);
    }
    const auto csv = read_csv(f.dir / "out" / "spectral.csv");
    CHECK(csv[0] == std::vector<std::string>{"dataset", "family", "arity", "normalized_spectral_ratio"});
    CHECK(csv.size() == rows.size() + 1);
}

TEST_CASE("identity-like data is maximally expressive") {
    std::vector<std::vector<Index>> rows;
    for (Index i = 0; i < 30; ++i) rows.push_back({i});
    const BinaryInteractionMatrix x(30, rows);
    ExperimentConfig cfg;
    cfg.kernels.families = {KernelFamily::Linear, KernelFamily::Tanimoto};
    cfg.output.dir = testing::scratch_dir("identity");
    for (const auto& r : run_spectral(x, cfg)) CHECK(r.normalized_spectral_ratio == doctest::Approx(1.0));
}

TEST_CASE("dataset statistics") {
    const BinaryInteractionMatrix x(4, {{0, 1}, {2}});
    const auto s = dataset_stats(x);
    CHECK(s.users == 4);
    CHECK(s.items == 2);
    CHECK(s.ratings == 3);
    CHECK(s.density == doctest::Approx(3.0 / 8.0));

    DatasetConfig d;
    d.name = "tiny";
    std::ostringstream out;
    CHECK(report_dataset_stats(s, d, out));
    CHECK(out.str().find("37.5000%") != std::string::npos);
    d.expected_users = 4;
    d.expected_items = 3;
    std::ostringstream out2;
    CHECK_FALSE(report_dataset_stats(s, d, out2));
    CHECK(out2.str().find("MISMATCH") != std::string::npos);
}

TEST_CASE("user cap applies on load") {
    Fixture f("cap");
    auto cfg = f.cfg;
    cfg.dataset.max_user_ratings = 10;
    const auto x = prepare_dataset(cfg);
    for (auto d : x.user_degrees()) CHECK(d <= 10);
    CHECK(x.user_count() < 120);
}

}
