#pragma once

#include "boolkern/data.hpp"
#include "boolkern/eval.hpp"
#include "boolkern/kernels.hpp"
#include "boolkern/ranker.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace boolkern {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DatasetConfig {
    std::string name = "dataset";
    std::filesystem::path path;
    LoadOptions load;
    /// Drop users with more than this many interactions; 0 keeps everyone.
    std::size_t max_user_ratings = 0;
    std::optional<std::size_t> expected_users;
    std::optional<std::size_t> expected_items;
    std::optional<std::size_t> expected_ratings;
};

struct KernelSweep {
    std::vector<KernelFamily> families;
    std::vector<std::uint32_t> conjunctive_arities{1, 2};
    std::vector<std::uint32_t> disjunctive_arities{1, 2};
    bool normalized = true;

    /// One spec per (family, arity), families in listed order.
    std::vector<KernelSpec> specs() const;
};

struct EvalConfig {
    std::size_t folds = 5;
    std::uint64_t seed = 42;
    std::size_t min_train = 5;
    MetricOptions metrics;
};

struct OutputConfig {
    std::filesystem::path dir = "results";
    bool manifest = true;
    double memory_budget_gb = 8.0;
};

struct ExperimentConfig {
    DatasetConfig dataset;
    KernelSweep kernels;
    RankerConfig ranker;
    EvalConfig eval;
    OutputConfig output;
};

/// Parses "1-5", "1,2,38", "2-50:4" and combinations ("1,2-4,10-30:10").
/// Throws ConfigError on malformed input, zero, or descending ranges.
std::vector<std::uint32_t> parse_arity_list(std::string_view text);

/// INI-style config with [dataset], [kernels], [ranker], [eval] and [output]
/// sections of key = value pairs. Relative paths resolve against `base_dir`.
/// Unknown sections or keys are a ConfigError.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out_dir;
    /// 0 keeps the runtime default.
    int workers = 0;
    /// Progress messages; nullptr silences them.
    std::ostream* log = nullptr;
};

struct ExperimentRow {
    std::string dataset;
    KernelSpec spec;
    EvalReport report;
    std::vector<double> gram_seconds;
    std::vector<double> fold_seconds;
    double wall_seconds = 0.0;
};

/// Loads the dataset (applying the user cap) and checks every kernel spec
/// against it; throws ConfigError before any kernel is built.
BinaryInteractionMatrix prepare_dataset(const ExperimentConfig& config);

/// For every (kernel, arity): trains and evaluates on each fold, then writes
/// results.csv, folds.csv, curve_<family>.csv and the fold manifest to the
/// output directory. An empty kernel list is a warned no-op.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config, const RunOptions& options = {});
/// Same, on an already loaded matrix.
std::vector<ExperimentRow> run_experiment(const BinaryInteractionMatrix& data, const ExperimentConfig& config,
                                          const RunOptions& options = {});

struct SpectralRow {
    std::string dataset;
    KernelSpec spec;
    double normalized_spectral_ratio = 0.0;
    double gram_seconds = 0.0;
};

/// Normalized spectral ratio of each normalized kernel over the full
/// dataset, arity 1 always included for the arity families, plus the mDNF
/// point whenever the conjunctive family is swept. Writes spectral.csv.
std::vector<SpectralRow> run_spectral(const ExperimentConfig& config, const RunOptions& options = {});
std::vector<SpectralRow> run_spectral(const BinaryInteractionMatrix& data, const ExperimentConfig& config,
                                      const RunOptions& options = {});

struct DatasetStats {
    std::size_t users = 0;
    std::size_t items = 0;
    std::size_t ratings = 0;
    double density = 0.0;
};

DatasetStats dataset_stats(const BinaryInteractionMatrix& x);
/// Prints the stats and, when the config carries expected values, a
/// match/mismatch line per value. Returns false on any mismatch.
bool report_dataset_stats(const DatasetStats& stats, const DatasetConfig& dataset, std::ostream& out);

}  // namespace boolkern
