#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace boolkern::detail {

// std::mt19937_64's output sequence is fixed by the standard; the helpers
// below replace the implementation-defined distributions so shuffles are
// identical on every platform.

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

template <typename T>
void shuffle(std::span<T> values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

}  // namespace boolkern::detail
