#include "boolkern/gram.hpp"

#include "boolkern/binomial.hpp"
#include "disjunctive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boolkern {

KernelMatrix::KernelMatrix(std::size_t m, std::vector<double> values, KernelSpec spec)
    : m_(m), values_(std::move(values)), spec_(spec) {
    if (values_.size() != m * m) {
        throw std::invalid_argument("KernelMatrix: expected " + std::to_string(m * m) +
                                    " values, got " + std::to_string(values_.size()));
    }
}

bool KernelMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t j = i + 1; j < m_; ++j) {
            if ((*this)(i, j) != (*this)(j, i)) return false;
        }
    }
    return true;
}

OverlapMatrix::OverlapMatrix(const BinaryInteractionMatrix& x)
    : m_(x.item_count()), n_(x.user_count()), counts_(m_ * m_, 0) {
    const auto by_user = x.user_rows();
    const auto m = static_cast<std::ptrdiff_t>(m_);
    // Each iteration writes only its own row.
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        std::uint32_t* out = counts_.data() + static_cast<std::size_t>(i) * m_;
        for (Index u : x.row(static_cast<std::size_t>(i))) {
            for (Index j : by_user[u]) ++out[j];
        }
    }
}

std::uint32_t OverlapMatrix::max_degree() const {
    std::uint32_t best = 0;
    for (std::size_t i = 0; i < m_; ++i) best = std::max(best, degree(i));
    return best;
}

void check_memory_budget(std::size_t m, std::uint64_t budget_bytes) {
    const auto needed = gram_bytes(m);
    if (needed > budget_bytes) {
        throw std::length_error("kernel matrix for " + std::to_string(m) + " items needs " +
                                std::to_string(needed) + " bytes, over the budget of " +
                                std::to_string(budget_bytes) + "; subsample items or raise the budget");
    }
}

namespace {

// Fills the upper triangle with entry(i, j) and mirrors it.
template <typename Entry>
std::vector<double> fill_symmetric(std::size_t m, Entry entry) {
    std::vector<double> values(m * m);
    const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t ii = 0; ii < mm; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        for (std::size_t j = i; j < m; ++j) values[i * m + j] = entry(i, j);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) values[j * m + i] = values[i * m + j];
    }
    return values;
}

// Normalized entry given a null-embedding predicate and the off-diagonal formula.
template <typename IsNull, typename Value>
std::vector<double> fill_normalized(std::size_t m, IsNull is_null, Value value) {
    return fill_symmetric(m, [&](std::size_t i, std::size_t j) -> double {
        if (i == j) return 1.0;
        if (is_null(i) || is_null(j)) return 0.0;
        return value(i, j);
    });
}

std::vector<double> normalized_values(const OverlapMatrix& ov, const KernelSpec& spec) {
    const std::size_t m = ov.size();
    const auto empty = [&](std::size_t i) { return ov.degree(i) == 0; };
    const auto cosine = [&](std::size_t i, std::size_t j) {
        return static_cast<double>(ov(i, j)) /
               std::sqrt(static_cast<double>(ov.degree(i)) * static_cast<double>(ov.degree(j)));
    };

    switch (spec.family) {
        case KernelFamily::Linear:
            return fill_normalized(m, empty, cosine);

        case KernelFamily::Conjunctive: {
            if (spec.arity == 1) return fill_normalized(m, empty, cosine);
            const std::uint32_t d = spec.arity;
            const LogBinomialTable table(ov.max_degree(), d);
            return fill_normalized(
                m, [&](std::size_t i) { return ov.degree(i) < d; },
                [&](std::size_t i, std::size_t j) {
                    const auto c = ov(i, j);
                    if (c < d) return 0.0;
                    return std::exp(table.log_binom(c) -
                                    0.5 * (table.log_binom(ov.degree(i)) + table.log_binom(ov.degree(j))));
                });
        }

        case KernelFamily::Disjunctive: {
            if (spec.arity == 1) return fill_normalized(m, empty, cosine);
            const MissProbabilityTable table(ov.variables(), spec.arity);
            std::vector<double> self(m);
            for (std::size_t i = 0; i < m; ++i) self[i] = -std::expm1(table.log_miss(ov.degree(i)));
            return fill_normalized(m, empty, [&](std::size_t i, std::size_t j) {
                const auto a = ov.degree(i);
                const auto b = ov.degree(j);
                const auto small = std::min(a, b);
                const auto large = std::max(a, b);
                const double frac = detail::disjunctive_fraction_from_logs(
                    table.log_miss(small), table.log_miss(large),
                    table.log_miss(std::uint64_t{a} + b - ov(i, j)));
                return std::min(1.0, frac / std::sqrt(self[i] * self[j]));
            });
        }

        case KernelFamily::MDNF:
            return fill_normalized(m, empty, [&](std::size_t i, std::size_t j) {
                return mdnf_normalized(ov.stats(i, j));
            });

        case KernelFamily::Tanimoto:
            return fill_normalized(m, empty, [&](std::size_t i, std::size_t j) {
                return tanimoto_kernel(ov.stats(i, j));
            });
    }
    throw std::invalid_argument("gram: unknown kernel family");
}

std::vector<double> raw_values(const OverlapMatrix& ov, const KernelSpec& spec) {
    const std::size_t m = ov.size();
    switch (spec.family) {
        case KernelFamily::Linear:
            return fill_symmetric(m, [&](std::size_t i, std::size_t j) {
                return static_cast<double>(ov(i, j));
            });
        case KernelFamily::Conjunctive: {
            std::vector<double> binoms(ov.max_degree() + 1);
            for (std::size_t k = 0; k < binoms.size(); ++k) binoms[k] = binom(k, spec.arity);
            return fill_symmetric(m, [&](std::size_t i, std::size_t j) { return binoms[ov(i, j)]; });
        }
        default:
            return fill_symmetric(m, [&](std::size_t i, std::size_t j) {
                return kernel_value(ov.stats(i, j), spec);
            });
    }
}

}  // namespace

KernelMatrix gram(const OverlapMatrix& overlaps, const KernelSpec& spec) {
    spec.validate(overlaps.variables());
    const std::size_t m = overlaps.size();
    KernelMatrix out(m, spec.normalized ? normalized_values(overlaps, spec) : raw_values(overlaps, spec),
                     spec);
    if (spec.family == KernelFamily::Tanimoto) {
        std::size_t empty = 0;
        for (std::size_t i = 0; i < m; ++i) empty += overlaps.degree(i) == 0 ? 1 : 0;
        out.set_degenerate_pairs(empty * (empty + 1) / 2);
    }
    return out;
}

KernelMatrix gram(const BinaryInteractionMatrix& x, const KernelSpec& spec) {
    return gram(OverlapMatrix(x), spec);
}

KernelMatrix normalize_kernel(KernelMatrix k) {
    const std::size_t m = k.size();
    std::vector<double> diag(m);
    for (std::size_t i = 0; i < m; ++i) diag[i] = k(i, i);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) {
                k(i, j) = 1.0;
            } else if (diag[i] <= 0.0 || diag[j] <= 0.0) {
                k(i, j) = 0.0;
            } else {
                k(i, j) = k(i, j) / std::sqrt(diag[i] * diag[j]);
            }
        }
    }
    k.spec().normalized = true;
    return k;
}

}  // namespace boolkern
