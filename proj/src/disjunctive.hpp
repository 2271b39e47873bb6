#pragma once

namespace boolkern::detail {

// Fraction of d-subsets hitting both sets, from log miss-probabilities of
// the smaller set, the larger set, and their union.
double disjunctive_fraction_from_logs(double log_miss_small, double log_miss_large,
                                      double log_miss_union);

}  // namespace boolkern::detail
