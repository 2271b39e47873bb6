#include "boolkern/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace boolkern {

namespace {

enum : char { kNegative = 0, kTest = 1, kTrain = 2 };

struct Labels {
    std::vector<char> status;
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

Labels label_items(std::span<const Index> test_pos, std::span<const Index> train_pos, std::size_t m) {
    Labels out;
    out.status.assign(m, kNegative);
    for (Index i : train_pos) {
        if (i >= m) throw std::invalid_argument("training positive index out of range");
        out.status[i] = kTrain;
    }
    for (Index i : test_pos) {
        if (i >= m) throw std::invalid_argument("test positive index out of range");
        if (out.status[i] == kTrain) throw std::invalid_argument("test and training positives overlap");
        if (out.status[i] == kTest) continue;
        out.status[i] = kTest;
        ++out.positives;
    }
    for (char s : out.status) out.negatives += s == kNegative ? 1 : 0;
    return out;
}

double auc_from_labels(const Labels& labels, std::span<const double> scores, bool half_credit) {
    std::vector<double> neg;
    neg.reserve(labels.negatives);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels.status[i] == kNegative) neg.push_back(scores[i]);
    }
    std::sort(neg.begin(), neg.end());
    std::uint64_t below = 0;
    std::uint64_t ties = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels.status[i] != kTest) continue;
        const auto lo = std::lower_bound(neg.begin(), neg.end(), scores[i]);
        below += static_cast<std::uint64_t>(lo - neg.begin());
        if (half_credit) {
            const auto hi = std::upper_bound(lo, neg.end(), scores[i]);
            ties += static_cast<std::uint64_t>(hi - lo);
        }
    }
    const double pairs = static_cast<double>(labels.positives) * static_cast<double>(labels.negatives);
    if (half_credit) return (2.0 * static_cast<double>(below) + static_cast<double>(ties)) / (2.0 * pairs);
    return static_cast<double>(below) / pairs;
}

struct TopK {
    double average_precision = 0.0;
    double ndcg = 0.0;
};

TopK top_k_metrics(const Labels& labels, std::span<const double> scores, std::size_t k) {
    std::vector<Index> ranked;
    ranked.reserve(labels.positives + labels.negatives);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels.status[i] != kTrain) ranked.push_back(static_cast<Index>(i));
    }
    const std::size_t depth = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(depth), ranked.end(),
                      [&](Index a, Index b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });
    double hits = 0.0;
    double precision_sum = 0.0;
    double dcg = 0.0;
    for (std::size_t r = 0; r < depth; ++r) {
        if (labels.status[ranked[r]] != kTest) continue;
        hits += 1.0;
        precision_sum += hits / static_cast<double>(r + 1);
        dcg += 1.0 / std::log2(static_cast<double>(r + 2));
    }
    const std::size_t ideal_hits = std::min(labels.positives, k);
    double ideal = 0.0;
    for (std::size_t r = 0; r < ideal_hits; ++r) ideal += 1.0 / std::log2(static_cast<double>(r + 2));
    return {precision_sum / static_cast<double>(ideal_hits), dcg / ideal};
}

bool evaluable(const Labels& labels) { return labels.positives > 0 && labels.negatives > 0; }

}  // namespace

std::optional<double> auc(std::span<const Index> test_pos, std::span<const Index> train_pos,
                          std::span<const double> scores, const MetricOptions& options) {
    const auto labels = label_items(test_pos, train_pos, scores.size());
    if (!evaluable(labels)) return std::nullopt;
    return auc_from_labels(labels, scores, options.tie_half_credit);
}

std::optional<double> map_at_k(std::span<const Index> test_pos, std::span<const Index> train_pos,
                               std::span<const double> scores, const MetricOptions& options) {
    const auto labels = label_items(test_pos, train_pos, scores.size());
    if (!evaluable(labels)) return std::nullopt;
    return top_k_metrics(labels, scores, options.k).average_precision;
}

std::optional<double> ndcg_at_k(std::span<const Index> test_pos, std::span<const Index> train_pos,
                                std::span<const double> scores, const MetricOptions& options) {
    const auto labels = label_items(test_pos, train_pos, scores.size());
    if (!evaluable(labels)) return std::nullopt;
    return top_k_metrics(labels, scores, options.k).ndcg;
}

std::optional<UserMetrics> evaluate_user(std::span<const Index> test_pos, std::span<const Index> train_pos,
                                         std::span<const double> scores, const MetricOptions& options) {
    const auto labels = label_items(test_pos, train_pos, scores.size());
    if (!evaluable(labels)) return std::nullopt;
    const auto top = top_k_metrics(labels, scores, options.k);
    return UserMetrics{auc_from_labels(labels, scores, options.tie_half_credit), top.average_precision,
                       top.ndcg};
}

void FoldAccumulator::add(const std::optional<UserMetrics>& user) {
    if (!user) {
        ++skipped_;
        return;
    }
    auc_ += user->auc;
    map_ += user->map;
    ndcg_ += user->ndcg;
    ++evaluated_;
}

FoldMetrics FoldAccumulator::result() const {
    FoldMetrics out;
    out.users_evaluated = evaluated_;
    out.users_skipped = skipped_;
    if (evaluated_ > 0) {
        const double n = static_cast<double>(evaluated_);
        out.auc = auc_ / n;
        out.map = map_ / n;
        out.ndcg = ndcg_ / n;
    }
    return out;
}

MetricSummary summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: no values");
    MetricSummary out;
    out.per_fold.assign(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / n);
    return out;
}

EvalReport aggregate(std::span<const FoldMetrics> folds) {
    if (folds.empty()) throw std::invalid_argument("aggregate: need at least one fold");
    std::vector<double> a, p, g;
    for (const auto& f : folds) {
        a.push_back(f.auc);
        p.push_back(f.map);
        g.push_back(f.ndcg);
    }
    return {summarize(a), summarize(p), summarize(g), {folds.begin(), folds.end()}};
}

}  // namespace boolkern
