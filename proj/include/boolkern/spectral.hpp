#pragma once

#include "boolkern/gram.hpp"

namespace boolkern {

/// Trace norm over Frobenius norm, trace(K) / sqrt(sum_ij K_ij^2), the rank
/// proxy used to compare kernel expressiveness. The sum of squares is
/// accumulated with compensated summation.
/// Throws std::domain_error when the trace is not positive.
double spectral_ratio(const KernelMatrix& k);

/// (spectral_ratio(K) - 1) / (sqrt(m) - 1), in [0, 1] for normalized
/// kernels: 0 for the constant matrix, 1 for the identity.
/// Throws std::domain_error when m < 2.
double normalized_spectral_ratio(const KernelMatrix& k);

}  // namespace boolkern
