#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace boolkern {

enum class KernelFamily { Linear, Conjunctive, Disjunctive, MDNF, Tanimoto };

std::string_view to_string(KernelFamily family);
/// Accepts the names produced by to_string, case-insensitively.
KernelFamily parse_family(std::string_view name);
/// Conjunctive and Disjunctive are parameterized by an arity; the rest ignore it.
bool uses_arity(KernelFamily family);

struct KernelSpec {
    KernelFamily family = KernelFamily::Linear;
    std::uint32_t arity = 1;
    bool normalized = true;

    /// Throws std::domain_error when the arity is zero or exceeds the
    /// variable count for an arity-parameterized family.
    void validate(std::uint64_t variable_count) const;
    std::string label() const;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Counts describing a pair of binary vectors over n variables.
struct BinaryVectorStats {
    std::uint64_t n = 0;    // variables
    std::uint64_t nx = 0;   // |x|
    std::uint64_t nz = 0;   // |z|
    std::uint64_t nxz = 0;  // |x & z| = <x, z>

    /// Throws std::domain_error unless nxz <= min(nx, nz) <= max(nx, nz) <= n.
    void validate() const;
};

inline double linear_kernel(const BinaryVectorStats& s) { return static_cast<double>(s.nxz); }

/// Common true conjunctions of d variables: C(nxz, d).
double c_kernel(const BinaryVectorStats& s, std::uint32_t d);

/// Fraction of the C(n, d) d-subsets of variables that hit both x and z,
/// i.e. d_kernel(s, d) / C(n, d). Evaluated without forming any binomial.
double disjunctive_fraction(const BinaryVectorStats& s, std::uint32_t d);

/// Common true disjunctions of d variables:
/// C(n,d) - C(n-nx,d) - C(n-nz,d) + C(n-nx-nz+nxz,d), evaluated in the
/// factored form C(n,d) * disjunctive_fraction. Infinite once C(n,d)
/// leaves the double range; consume normalized values at that scale.
/// Throws std::domain_error when d > n or d == 0.
double d_kernel(const BinaryVectorStats& s, std::uint32_t d);

/// 2^nxz - 1, or its log2 when the count is too large to keep exactly.
struct MdnfValue {
    double value = 0.0;
    bool is_log = false;

    /// Value as a double (may be inf for very large log values).
    double to_double() const;
};

inline constexpr std::uint64_t kMdnfExactLimit = 30;

/// Exact below kMdnfExactLimit common actives; above, the log2 value
/// nxz (dropping the -1, relative error <= 2^-30).
MdnfValue mdnf_kernel(const BinaryVectorStats& s);

/// (2^nxz - 1) / sqrt((2^nx - 1)(2^nz - 1)) without overflow at any size.
/// Zero when either vector is empty.
double mdnf_normalized(const BinaryVectorStats& s);

/// Jaccard coefficient nxz / (nx + nz - nxz). Two empty vectors are
/// degenerate and score 0.
double tanimoto_kernel(const BinaryVectorStats& s);
inline bool tanimoto_degenerate(const BinaryVectorStats& s) { return s.nx == 0 && s.nz == 0; }

/// Unnormalized kernel value for any family.
double kernel_value(const BinaryVectorStats& s, const KernelSpec& spec);

}  // namespace boolkern
