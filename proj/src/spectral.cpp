#include "boolkern/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace boolkern {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

double spectral_ratio(const KernelMatrix& k) {
    const std::size_t m = k.size();
    CompensatedSum trace;
    for (std::size_t i = 0; i < m; ++i) trace.add(k(i, i));
    if (!(trace.value() > 0.0)) throw std::domain_error("spectral_ratio: trace must be positive");

    // Per-row partial sums in parallel, combined in a fixed order so the
    // result does not depend on the thread count.
    std::vector<double> partial(m);
    const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < mm; ++ii) {
        CompensatedSum row;
        for (double v : k.row(static_cast<std::size_t>(ii))) row.add(v * v);
        partial[static_cast<std::size_t>(ii)] = row.value();
    }
    CompensatedSum squares;
    for (double p : partial) squares.add(p);
    return trace.value() / std::sqrt(squares.value());
}

double normalized_spectral_ratio(const KernelMatrix& k) {
    if (k.size() < 2) throw std::domain_error("normalized_spectral_ratio: need at least 2 items");
    const double root_m = std::sqrt(static_cast<double>(k.size()));
    return (spectral_ratio(k) - 1.0) / (root_m - 1.0);
}

}  // namespace boolkern
