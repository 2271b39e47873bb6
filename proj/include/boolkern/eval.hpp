#pragma once

#include "boolkern/data.hpp"

#include <optional>
#include <span>
#include <vector>

namespace boolkern {

struct MetricOptions {
    std::size_t k = 10;
    /// Count tied positive/negative pairs as half a correct pair. Off by
    /// default: the indicator is a strict inequality.
    bool tie_half_credit = false;
};

// Per-user metrics. P = test positives; N = items in neither train nor test
// positives. The index lists need not be sorted but must be disjoint. An empty
// P or N yields nullopt (the user is skipped). Throws std::invalid_argument when
// P and the training positives overlap or an index is out of range.

/// Fraction of (p, n) pairs with score_p > score_n, via rank statistics in
/// O(m log m).
std::optional<double> auc(std::span<const Index> test_pos, std::span<const Index> train_pos,
                          std::span<const double> scores, const MetricOptions& options = {});

/// Average precision over the top-k of the ranked list (training positives
/// removed), divided by min(|P|, k).
std::optional<double> map_at_k(std::span<const Index> test_pos, std::span<const Index> train_pos,
                               std::span<const double> scores, const MetricOptions& options = {});

/// Binary-gain DCG@k with log2(rank + 1) discount over the ideal DCG for
/// min(|P|, k) relevant items.
std::optional<double> ndcg_at_k(std::span<const Index> test_pos, std::span<const Index> train_pos,
                                std::span<const double> scores, const MetricOptions& options = {});

struct UserMetrics {
    double auc = 0.0;
    double map = 0.0;
    double ndcg = 0.0;
};

/// All three metrics with a single sort.
std::optional<UserMetrics> evaluate_user(std::span<const Index> test_pos, std::span<const Index> train_pos,
                                         std::span<const double> scores, const MetricOptions& options = {});

/// Means over the evaluated users of one fold.
struct FoldMetrics {
    double auc = 0.0;
    double map = 0.0;
    double ndcg = 0.0;
    std::size_t users_evaluated = 0;
    std::size_t users_skipped = 0;
};

/// Accumulates per-user metrics into the 1/|U| outer mean.
class FoldAccumulator {
public:
    void add(const std::optional<UserMetrics>& user);
    FoldMetrics result() const;

private:
    double auc_ = 0.0;
    double map_ = 0.0;
    double ndcg_ = 0.0;
    std::size_t evaluated_ = 0;
    std::size_t skipped_ = 0;
};

struct MetricSummary {
    double mean = 0.0;
    /// Population standard deviation across folds.
    double std = 0.0;
    std::vector<double> per_fold;
};

MetricSummary summarize(std::span<const double> values);

struct EvalReport {
    MetricSummary auc;
    MetricSummary map;
    MetricSummary ndcg;
    std::vector<FoldMetrics> folds;
};

/// Throws std::invalid_argument when no folds are given.
EvalReport aggregate(std::span<const FoldMetrics> folds);

}  // namespace boolkern
