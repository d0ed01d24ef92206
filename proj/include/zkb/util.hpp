#pragma once

#include <cstddef>
#include <stdexcept>

namespace zkb {

inline bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

/// log2 of a power of two; throws otherwise.
inline unsigned log2_exact(std::size_t n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("expected a power of two");
    unsigned k = 0;
    while ((std::size_t{1} << k) != n) ++k;
    return k;
}

} // namespace zkb
