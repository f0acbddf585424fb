#pragma once

#include <cstdint>
#include <vector>

#include "ftn/types.hpp"

namespace ftn {

// QAM alphabet with unit average power. `labels[i]` is the bit pattern of
// point i (bits_per_symbol bits, MSB first in the serialized stream).
struct Constellation {
    int order = 0;
    int bits_per_symbol = 0;
    cvec points;
    std::vector<std::uint32_t> labels;
    std::vector<int> index_of_label;  // label value -> point index

    const cplx& point_for_label(std::uint32_t label) const {
        return points[static_cast<std::size_t>(index_of_label[label])];
    }
};

// Ring-radius ratio of the two-ring circular 8QAM: inner points on the axes,
// outer points on the diagonals, r2/r1 = 1.932 before unit-power scaling.
inline constexpr double kCircular8RingRatio = 1.932;

// Supported orders: 2 (antipodal), 4 (Gray QPSK), 8 (two-ring circular),
// 16 (Gray square). Throws ConfigError otherwise.
Constellation build_constellation(int order);

// Same, with an explicit 8QAM ring ratio (order 8 only uses it).
Constellation build_constellation(int order, double ring_ratio);

// Consecutive groups of bits_per_symbol bits -> symbols. Throws FramingError
// if the bit count is not divisible.
cvec map_bits(const std::vector<std::uint8_t>& bits, const Constellation& c);

// Index of the Euclidean-nearest point; ties broken by lowest index.
int nearest_point(const cplx& y, const Constellation& c);

// Label of the nearest point.
std::uint32_t demap_hard(const cplx& y, const Constellation& c);

// Append the bits_per_symbol bits of `label` (MSB first) to `out`.
void append_label_bits(std::uint32_t label, int bits_per_symbol,
                       std::vector<std::uint8_t>& out);

}  // namespace ftn
