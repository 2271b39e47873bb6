#include "boolkern/binomial.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace boolkern {

namespace {

struct BinomCache {
    std::shared_mutex mutex;
    std::unordered_map<std::uint64_t, double> values;

    static std::uint64_t key(std::uint64_t q, std::uint32_t d) {
        return (q << 16) ^ d;
    }
};

BinomCache& binom_cache() {
    static BinomCache cache;
    return cache;
}

double binom_product(std::uint64_t q, std::uint32_t d) {
    double result = 1.0;
    for (std::uint32_t i = 0; i < d; ++i) {
        // result holds C(q, i) exactly while it fits in 53 bits, and
        // C(q, i) * (q - i) is divisible by i + 1.
        result = result * static_cast<double>(q - i) / static_cast<double>(i + 1);
    }
    return result;
}

}  // namespace

double binom(std::uint64_t q, std::uint32_t d) {
    if (q < d) return 0.0;
    if (d == 0 || d == q) return 1.0;
    if (d == 1) return static_cast<double>(q);

    // The key packs q into the high bits; fall back to direct evaluation
    // for arguments that do not fit.
    if (q >= (std::uint64_t{1} << 47) || d >= (1u << 16)) return binom_product(q, d);

    auto& cache = binom_cache();
    const auto key = BinomCache::key(q, d);
    {
        std::shared_lock lock(cache.mutex);
        if (auto it = cache.values.find(key); it != cache.values.end()) return it->second;
    }
    const double value = binom_product(q, d);
    std::unique_lock lock(cache.mutex);
    cache.values.emplace(key, value);
    return value;
}

double binom_ratio(std::uint64_t a, std::uint64_t b, std::uint32_t d) {
    if (a > b) {
        throw std::domain_error("binom_ratio: numerator argument " + std::to_string(a) +
                                " exceeds denominator argument " + std::to_string(b));
    }
    if (d > b) {
        throw std::domain_error("binom_ratio: arity " + std::to_string(d) +
                                " exceeds " + std::to_string(b));
    }
    if (a < d) return 0.0;
    if (a == b) return 1.0;
    double result = 1.0;
    for (std::uint32_t i = 0; i < d; ++i) {
        result *= static_cast<double>(a - i) / static_cast<double>(b - i);
    }
    return result;
}

double log_miss_probability(std::uint64_t k, std::uint64_t n, std::uint32_t d) {
    if (k > n) throw std::domain_error("log_miss_probability: k exceeds n");
    if (d > n) throw std::domain_error("log_miss_probability: arity exceeds n");
    if (k == 0) return 0.0;
    if (n - k < d) return -std::numeric_limits<double>::infinity();
    const double kk = static_cast<double>(k);
    double sum = 0.0;
    for (std::uint32_t i = 0; i < d; ++i) {
        sum += std::log1p(-kk / static_cast<double>(n - i));
    }
    return sum;
}

MissProbabilityTable::MissProbabilityTable(std::uint64_t n, std::uint32_t d)
    : n_(n), d_(d), log_miss_(n + 1) {
    if (d == 0) throw std::domain_error("MissProbabilityTable: arity must be positive");
    if (d > n) throw std::domain_error("MissProbabilityTable: arity exceeds variable count");
    for (std::uint64_t k = 0; k <= n; ++k) log_miss_[k] = log_miss_probability(k, n, d);
}

LogBinomialTable::LogBinomialTable(std::uint64_t max_k, std::uint32_t d)
    : d_(d), log_binom_(max_k + 1, -std::numeric_limits<double>::infinity()) {
    if (d == 0) throw std::domain_error("LogBinomialTable: arity must be positive");
    if (max_k < d) return;
    // log C(d, d) = 0, then C(k, d) = C(k - 1, d) * k / (k - d).
    double acc = 0.0;
    log_binom_[d] = 0.0;
    for (std::uint64_t k = d + 1; k <= max_k; ++k) {
        acc += std::log1p(static_cast<double>(d) / static_cast<double>(k - d));
        log_binom_[k] = acc;
    }
}

}  // namespace boolkern
