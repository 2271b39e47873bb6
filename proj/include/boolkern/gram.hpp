#pragma once

#include "boolkern/data.hpp"
#include "boolkern/kernels.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace boolkern {

/// Dense symmetric m x m kernel matrix between items, row-major.
class KernelMatrix {
public:
    KernelMatrix() = default;
    /// Throws std::invalid_argument when values.size() != m * m.
    KernelMatrix(std::size_t m, std::vector<double> values, KernelSpec spec = {});

    std::size_t size() const { return m_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * m_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * m_ + j]; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * m_, m_}; }
    std::span<const double> values() const { return values_; }

    const KernelSpec& spec() const { return spec_; }
    KernelSpec& spec() { return spec_; }
    /// Item pairs whose kernel value was degenerate (Tanimoto of two empty rows).
    std::size_t degenerate_pairs() const { return degenerate_pairs_; }
    void set_degenerate_pairs(std::size_t n) { degenerate_pairs_ = n; }

    bool is_symmetric() const;

private:
    std::size_t m_ = 0;
    std::vector<double> values_;
    KernelSpec spec_{};
    std::size_t degenerate_pairs_ = 0;
};

/// Pairwise common-active counts |x_i & x_j| between item rows, plus the
/// variable count. Everything the boolean kernels need, computed once.
class OverlapMatrix {
public:
    explicit OverlapMatrix(const BinaryInteractionMatrix& x);

    std::size_t size() const { return m_; }
    std::uint64_t variables() const { return n_; }
    std::uint32_t operator()(std::size_t i, std::size_t j) const { return counts_[i * m_ + j]; }
    std::uint32_t degree(std::size_t i) const { return counts_[i * m_ + i]; }
    std::uint32_t max_degree() const;

    BinaryVectorStats stats(std::size_t i, std::size_t j) const {
        return {n_, degree(i), degree(j), (*this)(i, j)};
    }

private:
    std::size_t m_;
    std::uint64_t n_;
    std::vector<std::uint32_t> counts_;
};

/// Bytes needed for a dense m x m double matrix.
constexpr std::uint64_t gram_bytes(std::uint64_t m) { return m * m * sizeof(double); }

/// Throws std::length_error when gram_bytes(m) exceeds `budget_bytes`.
void check_memory_budget(std::size_t m, std::uint64_t budget_bytes);

/// Kernel matrix over the item rows of the matrix the overlaps came from.
/// Normalized specs are evaluated in ratio form, so binomials that would
/// overflow cancel before they are formed; null embeddings get a unit
/// diagonal and zero off-diagonals.
KernelMatrix gram(const OverlapMatrix& overlaps, const KernelSpec& spec);
KernelMatrix gram(const BinaryInteractionMatrix& x, const KernelSpec& spec);

/// K[i][j] / sqrt(K[i][i] K[j][j]); rows with a zero diagonal become unit
/// vectors (1 on the diagonal, 0 elsewhere).
KernelMatrix normalize_kernel(KernelMatrix k);

}  // namespace boolkern
