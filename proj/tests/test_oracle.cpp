#include "boolkern/binomial.hpp"
#include "boolkern/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>

using namespace boolkern;
using oracle::BitVector;

namespace {

std::size_t ones(const BitVector& v) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1)); }

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("subsets are lexicographic") {
    const auto s = oracle::subsets(4, 2);
    REQUIRE(s.size() == 6);
    CHECK(s.front() == std::vector<std::uint32_t>{0, 1});
    CHECK(s[2] == std::vector<std::uint32_t>{0, 3});
    CHECK(s.back() == std::vector<std::uint32_t>{2, 3});
    CHECK(std::is_sorted(s.begin(), s.end()));
}

TEST_CASE("conjunctive embedding examples") {
    CHECK(oracle::conjunctive_embedding({1, 1, 0}, 2) == BitVector{1, 0, 0});
    CHECK(oracle::conjunctive_embedding({1, 1, 1, 1}, 3) == BitVector{1, 1, 1, 1});
    // subsets of 4 taken 2: 01 02 03 12 13 23
    CHECK(oracle::conjunctive_embedding({1, 0, 1, 1}, 2) == BitVector{0, 1, 1, 0, 0, 1});
}

TEST_CASE("disjunctive embedding examples") {
    CHECK(oracle::disjunctive_embedding({1, 0, 0}, 2) == BitVector{1, 1, 0});
    CHECK(oracle::disjunctive_embedding({0, 0, 0, 0}, 2) == BitVector(6, 0));
    CHECK(oracle::disjunctive_embedding({1, 1, 0, 0}, 2) == BitVector{1, 1, 1, 1, 1, 0});
}

TEST_CASE("embedding dimension and self counts") {
    for (std::size_t n = 1; n <= 10; ++n) {
        for (std::uint32_t d = 1; d <= std::min<std::size_t>(n, oracle::kMaxArity); ++d) {
            for (std::size_t k = 0; k <= n; ++k) {
                BitVector x(n, 0);
                std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k), 1);
                const auto c = oracle::conjunctive_embedding(x, d);
                const auto dj = oracle::disjunctive_embedding(x, d);
                CHECK(c.size() == static_cast<std::size_t>(binom(n, d)));
                CHECK(dj.size() == c.size());
                CHECK(ones(c) == static_cast<std::size_t>(binom(k, d)));
                CHECK(ones(dj) == static_cast<std::size_t>(binom(n, d) - binom(n - k, d)));
            }
        }
    }
}

TEST_CASE("conjunctive feature space is largest at half the variables") {
    for (std::size_t n = 2; n <= 12; ++n) {
        std::size_t best_d = 0;
        std::size_t best = 0;
        for (std::uint32_t d = 1; d <= std::min<std::size_t>(n, oracle::kMaxArity); ++d) {
            const auto size = oracle::subsets(n, d).size();
            if (size > best) {
                best = size;
                best_d = d;
            }
        }
        CHECK(best_d == std::min<std::size_t>(n / 2, oracle::kMaxArity));
    }
}

TEST_CASE("guards") {
    CHECK_THROWS_AS(oracle::conjunctive_embedding(BitVector(21, 1), 2), std::length_error);
    CHECK_THROWS_AS(oracle::disjunctive_embedding(BitVector(10, 1), 7), std::length_error);
    const std::vector<BitVector> uneven{{1, 0}, {1, 0, 1}};
    CHECK_THROWS_AS(oracle::gram_from_embedding(uneven), std::invalid_argument);
}

TEST_CASE("gram from embeddings") {
    const std::vector<BitVector> orth{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(oracle::gram_from_embedding(orth) == std::vector<std::int64_t>{1, 0, 0, 0, 1, 0, 0, 0, 1});
    const std::vector<BitVector> same(3, BitVector{1, 0, 1, 1});
    CHECK(oracle::gram_from_embedding(same) == std::vector<std::int64_t>(9, 3));
}

}
