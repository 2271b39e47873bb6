#pragma once

#include <cstdint>
#include <vector>

namespace boolkern {

/// C(q, d) through the multiplicative product prod_{i<d} (q - i) / (i + 1).
/// Zero when q < d. Results are memoized per (q, d); the cache is shared
/// across threads (concurrent lookups, serialized insertion).
double binom(std::uint64_t q, std::uint32_t d);

/// C(a, d) / C(b, d) = prod_{i<d} (a - i) / (b - i), never forming either
/// coefficient. Zero when a < d.
/// Throws std::domain_error when a > b or d > b.
double binom_ratio(std::uint64_t a, std::uint64_t b, std::uint32_t d);

/// log( C(n - k, d) / C(n, d) ): log-probability that a uniform d-subset of
/// n variables avoids a fixed set of k of them. -inf when n - k < d.
double log_miss_probability(std::uint64_t k, std::uint64_t n, std::uint32_t d);

/// Memo of log_miss_probability(k, n, d) for k = 0..n at fixed (n, d).
/// Built eagerly, immutable afterwards, so lookups need no locking.
class MissProbabilityTable {
public:
    MissProbabilityTable(std::uint64_t n, std::uint32_t d);

    double log_miss(std::uint64_t k) const { return log_miss_[k]; }
    std::uint64_t variables() const { return n_; }
    std::uint32_t arity() const { return d_; }

private:
    std::uint64_t n_;
    std::uint32_t d_;
    std::vector<double> log_miss_;
};

/// Memo of log C(k, d) for k = 0..max_k at fixed d (-inf when k < d).
class LogBinomialTable {
public:
    LogBinomialTable(std::uint64_t max_k, std::uint32_t d);

    double log_binom(std::uint64_t k) const { return log_binom_[k]; }
    std::uint32_t arity() const { return d_; }

private:
    std::uint32_t d_;
    std::vector<double> log_binom_;
};

}  // namespace boolkern
