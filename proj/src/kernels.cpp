#include "boolkern/kernels.hpp"

#include "boolkern/binomial.hpp"
#include "disjunctive.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace boolkern {

namespace {

constexpr std::array<std::pair<KernelFamily, std::string_view>, 5> kFamilyNames{{
    {KernelFamily::Linear, "linear"},
    {KernelFamily::Conjunctive, "conjunctive"},
    {KernelFamily::Disjunctive, "disjunctive"},
    {KernelFamily::MDNF, "mdnf"},
    {KernelFamily::Tanimoto, "tanimoto"},
}};

// Largest double below which every integer is representable.
constexpr double kExactIntegerLimit = 9007199254740992.0;

}  // namespace

std::string_view to_string(KernelFamily family) {
    for (const auto& [f, name] : kFamilyNames) {
        if (f == family) return name;
    }
    return "unknown";
}

KernelFamily parse_family(std::string_view name) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (const auto& [f, n] : kFamilyNames) {
        if (n == lowered) return f;
    }
    if (lowered == "c-kernel" || lowered == "ckernel") return KernelFamily::Conjunctive;
    if (lowered == "d-kernel" || lowered == "dkernel") return KernelFamily::Disjunctive;
    throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

bool uses_arity(KernelFamily family) {
    return family == KernelFamily::Conjunctive || family == KernelFamily::Disjunctive;
}

void KernelSpec::validate(std::uint64_t variable_count) const {
    if (!uses_arity(family)) return;
    if (arity == 0) throw std::domain_error(label() + ": arity must be at least 1");
    if (arity > variable_count) {
        throw std::domain_error(label() + ": arity exceeds the number of variables (" +
                                std::to_string(variable_count) + ")");
    }
}

std::string KernelSpec::label() const {
    std::string out(to_string(family));
    if (uses_arity(family)) out += "(" + std::to_string(arity) + ")";
    return out;
}

void BinaryVectorStats::validate() const {
    if (nxz > std::min(nx, nz) || nx > n || nz > n) {
        throw std::domain_error("inconsistent binary vector stats: need nxz <= min(nx, nz) and nx, nz <= n");
    }
}

double c_kernel(const BinaryVectorStats& s, std::uint32_t d) {
    return binom(s.nxz, d);
}

namespace detail {

double disjunctive_fraction_from_logs(double log_miss_small, double log_miss_large,
                                      double log_miss_union) {
    // P(hit x & hit z) = P(hit x) - P(miss z) * P(hit x \ z | miss z), with x
    // the smaller set, so the subtraction loses at most ~1/P(hit z | hit x).
    const double hit_small = -std::expm1(log_miss_small);
    if (std::isinf(log_miss_large)) return hit_small;
    const double miss_large = std::exp(log_miss_large);
    const double hit_rest = std::isinf(log_miss_union) ? 1.0 : -std::expm1(log_miss_union - log_miss_large);
    return std::max(0.0, hit_small - miss_large * hit_rest);
}

}  // namespace detail

double disjunctive_fraction(const BinaryVectorStats& s, std::uint32_t d) {
    s.validate();
    if (d == 0 || d > s.n) throw std::domain_error("disjunctive kernel needs 1 <= d <= n");
    const auto small = std::min(s.nx, s.nz);
    const auto large = std::max(s.nx, s.nz);
    if (small == 0) return 0.0;
    const auto union_size = s.nx + s.nz - s.nxz;
    return detail::disjunctive_fraction_from_logs(log_miss_probability(small, s.n, d),
                                                  log_miss_probability(large, s.n, d),
                                                  log_miss_probability(union_size, s.n, d));
}

double d_kernel(const BinaryVectorStats& s, std::uint32_t d) {
    s.validate();
    if (d == 0 || d > s.n) throw std::domain_error("disjunctive kernel needs 1 <= d <= n");
    const double total = binom(s.n, d);
    if (total < kExactIntegerLimit) {
        // Every term is an exact integer here; inclusion-exclusion is exact.
        const double value = total - binom(s.n - s.nx, d) - binom(s.n - s.nz, d) +
                             binom(s.n - s.nx - s.nz + s.nxz, d);
        return value;
    }
    return total * disjunctive_fraction(s, d);
}

double MdnfValue::to_double() const {
    return is_log ? std::exp2(value) : value;
}

MdnfValue mdnf_kernel(const BinaryVectorStats& s) {
    if (s.nxz <= kMdnfExactLimit) {
        return {static_cast<double>((std::uint64_t{1} << s.nxz) - 1), false};
    }
    return {static_cast<double>(s.nxz), true};
}

double mdnf_normalized(const BinaryVectorStats& s) {
    s.validate();
    if (s.nx == 0 || s.nz == 0) return 0.0;
    constexpr double ln2 = 0.69314718055994530942;
    // 1 - 2^-k, accurate for every k >= 1
    auto tail = [](std::uint64_t k) { return -std::expm1(-static_cast<double>(k) * ln2); };
    const double exponent =
        static_cast<double>(s.nxz) - 0.5 * (static_cast<double>(s.nx) + static_cast<double>(s.nz));
    return std::exp2(exponent) * tail(s.nxz) / std::sqrt(tail(s.nx) * tail(s.nz));
}

double tanimoto_kernel(const BinaryVectorStats& s) {
    s.validate();
    if (tanimoto_degenerate(s)) return 0.0;
    return static_cast<double>(s.nxz) / static_cast<double>(s.nx + s.nz - s.nxz);
}

double kernel_value(const BinaryVectorStats& s, const KernelSpec& spec) {
    switch (spec.family) {
        case KernelFamily::Linear: return linear_kernel(s);
        case KernelFamily::Conjunctive: return c_kernel(s, spec.arity);
        case KernelFamily::Disjunctive: return d_kernel(s, spec.arity);
        case KernelFamily::MDNF: return mdnf_kernel(s).to_double();
        case KernelFamily::Tanimoto: return tanimoto_kernel(s);
    }
    throw std::invalid_argument("kernel_value: unknown family");
}

}  // namespace boolkern
