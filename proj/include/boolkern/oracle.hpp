#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace boolkern::oracle {

// Brute-force feature maps of the conjunctive and disjunctive kernels, for
// checking the closed forms on small inputs only.

inline constexpr std::size_t kMaxVariables = 20;
inline constexpr std::uint32_t kMaxArity = 6;

using BitVector = std::vector<std::uint8_t>;

/// All d-subsets of {0..n-1}, lexicographic.
std::vector<std::vector<std::uint32_t>> subsets(std::size_t n, std::uint32_t d);

/// One coordinate per d-subset: 1 iff every variable in it is active in x.
/// Throws std::length_error past kMaxVariables / kMaxArity.
BitVector conjunctive_embedding(const BitVector& x, std::uint32_t d);

/// One coordinate per d-subset: 1 iff some variable in it is active in x.
BitVector disjunctive_embedding(const BitVector& x, std::uint32_t d);

/// Pairwise integer dot products, row-major.
/// Throws std::invalid_argument on unequal lengths.
std::vector<std::int64_t> gram_from_embedding(std::span<const BitVector> embeddings);

}  // namespace boolkern::oracle
