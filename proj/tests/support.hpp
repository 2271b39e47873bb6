#pragma once

#include "boolkern/data.hpp"
#include "boolkern/oracle.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

using boolkern::BinaryInteractionMatrix;
using boolkern::Index;

/// Random items x users matrix; each cell is active with probability p.
/// Every item gets at least `min_active` users (clamped to n).
inline BinaryInteractionMatrix random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n, double p,
                                             std::size_t min_active = 0) {
    std::bernoulli_distribution cell(p);
    std::vector<std::vector<Index>> rows(m);
    std::vector<Index> users(n);
    for (std::size_t u = 0; u < n; ++u) users[u] = static_cast<Index>(u);
    min_active = std::min(min_active, n);
    for (auto& row : rows) {
        for (std::size_t u = 0; u < n; ++u) {
            if (cell(rng)) row.push_back(static_cast<Index>(u));
        }
        if (row.size() < min_active) {
            std::shuffle(users.begin(), users.end(), rng);
            row.assign(users.begin(), users.begin() + static_cast<std::ptrdiff_t>(min_active));
            std::sort(row.begin(), row.end());
        }
    }
    return BinaryInteractionMatrix(n, std::move(rows));
}

inline std::vector<boolkern::oracle::BitVector> bit_rows(const BinaryInteractionMatrix& x) {
    std::vector<boolkern::oracle::BitVector> out;
    for (const auto& row : x.rows()) {
        boolkern::oracle::BitVector bits(x.user_count(), 0);
        for (auto u : row) bits[u] = 1;
        out.push_back(std::move(bits));
    }
    return out;
}

/// Synthetic user x item interactions with planted taste clusters, so that a
/// working recommender clearly beats chance.
inline std::string clustered_ratings(std::uint64_t seed, std::size_t users, std::size_t items,
                                     std::size_t clusters) {
    std::mt19937_64 rng(seed);
    std::ostringstream out;
    std::uniform_int_distribution<std::size_t> degree(6, 24);
    std::uniform_int_distribution<int> rating(1, 5);
    const std::size_t block = items / clusters;
    for (std::size_t u = 0; u < users; ++u) {
        const std::size_t c = u % clusters;
        const std::size_t k = degree(rng);
        std::uniform_int_distribution<std::size_t> in_block(c * block, c * block + block - 1);
        std::uniform_int_distribution<std::size_t> any(0, items - 1);
        std::bernoulli_distribution off_cluster(0.15);
        for (std::size_t j = 0; j < k; ++j) {
            const auto item = off_cluster(rng) ? any(rng) : in_block(rng);
            out << "u" << u << '\t' << "i" << item << '\t' << rating(rng) << '\n';
        }
    }
    return out.str();
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("boolkern_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing
