#pragma once

#include <cstddef>
#include <span>

namespace truthboost::detail {

/// Fixed-order pairwise summation: bit-stable for a given input order, O(log n) error growth.
inline double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kBlock = 8;
    if (values.size() <= kBlock) {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace truthboost::detail
