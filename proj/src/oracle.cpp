#include "boolkern/oracle.hpp"

#include <stdexcept>
#include <string>

namespace boolkern::oracle {

namespace {

void check_guard(std::size_t n, std::uint32_t d) {
    if (n > kMaxVariables || d > kMaxArity) {
        throw std::length_error("oracle embeddings are limited to n <= " + std::to_string(kMaxVariables) +
                                ", d <= " + std::to_string(kMaxArity));
    }
}

template <typename Predicate>
BitVector embed(const BitVector& x, std::uint32_t d, Predicate keep) {
    check_guard(x.size(), d);
    BitVector out;
    for (const auto& s : subsets(x.size(), d)) out.push_back(keep(s) ? 1 : 0);
    return out;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> subsets(std::size_t n, std::uint32_t d) {
    check_guard(n, d);
    std::vector<std::vector<std::uint32_t>> out;
    if (d > n) return out;
    std::vector<std::uint32_t> current(d);
    for (std::uint32_t i = 0; i < d; ++i) current[i] = i;
    for (;;) {
        out.push_back(current);
        // advance the rightmost index that still has room
        std::int64_t pos = static_cast<std::int64_t>(d) - 1;
        while (pos >= 0 && current[pos] == n - d + static_cast<std::size_t>(pos)) --pos;
        if (pos < 0) break;
        ++current[pos];
        for (std::size_t k = static_cast<std::size_t>(pos) + 1; k < d; ++k) current[k] = current[k - 1] + 1;
    }
    return out;
}

BitVector conjunctive_embedding(const BitVector& x, std::uint32_t d) {
    return embed(x, d, [&](const std::vector<std::uint32_t>& s) {
        for (auto v : s) {
            if (!x[v]) return false;
        }
        return true;
    });
}

BitVector disjunctive_embedding(const BitVector& x, std::uint32_t d) {
    return embed(x, d, [&](const std::vector<std::uint32_t>& s) {
        for (auto v : s) {
            if (x[v]) return true;
        }
        return false;
    });
}

std::vector<std::int64_t> gram_from_embedding(std::span<const BitVector> embeddings) {
    const std::size_t m = embeddings.size();
    std::vector<std::int64_t> out(m * m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (embeddings[i].size() != embeddings[0].size()) {
            throw std::invalid_argument("gram_from_embedding: embeddings differ in length");
        }
        for (std::size_t j = 0; j < m; ++j) {
            std::int64_t dot = 0;
            for (std::size_t k = 0; k < embeddings[i].size(); ++k) dot += embeddings[i][k] * embeddings[j][k];
            out[i * m + j] = dot;
        }
    }
    return out;
}

}  // namespace boolkern::oracle
