#include "ftn/constellation.hpp"

#include <cmath>
#include <string>

#include "ftn/errors.hpp"

namespace ftn {

namespace {

void finalize(Constellation& c) {
    c.bits_per_symbol = 0;
    for (int q = c.order; q > 1; q >>= 1) ++c.bits_per_symbol;
    c.index_of_label.assign(static_cast<std::size_t>(c.order), -1);
    for (std::size_t i = 0; i < c.labels.size(); ++i)
        c.index_of_label[c.labels[i]] = static_cast<int>(i);
    // renormalize to unit average power
    double p = 0.0;
    for (const auto& pt : c.points) p += std::norm(pt);
    const double scale = 1.0 / std::sqrt(p / static_cast<double>(c.order));
    for (auto& pt : c.points) pt *= scale;
}

Constellation make_bpsk() {
    Constellation c;
    c.order = 2;
    c.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    c.labels = {0, 1};
    finalize(c);
    return c;
}

// Gray labels 00, 01, 11, 10 walking the circle from (1+i)/sqrt(2).
Constellation make_qpsk() {
    Constellation c;
    c.order = 4;
    const double s = 1.0 / std::sqrt(2.0);
    c.points = {cplx(s, s), cplx(-s, s), cplx(-s, -s), cplx(s, -s)};
    c.labels = {0b00, 0b01, 0b11, 0b10};
    finalize(c);
    return c;
}

// Two-ring circular 8QAM: inner ring on the axes, outer ring on the
// diagonals. Points indexed by angle (0, 45, ..., 315 deg); label table is
// the binary-reflected Gray cycle around the ring:
//   angle  0   45   90  135  180  225  270  315
//   ring   in  out  in  out  in   out  in   out
//   label 000  001  011  010  110  111  101  100
Constellation make_circular8(double ring_ratio) {
    Constellation c;
    c.order = 8;
    const double r1 = 1.0;
    const double r2 = ring_ratio;
    c.points.reserve(8);
    c.labels.reserve(8);
    for (int k = 0; k < 8; ++k) {
        const double ang = 0.25 * M_PI * k;
        const double r = (k % 2 == 0) ? r1 : r2;
        c.points.emplace_back(r * std::cos(ang), r * std::sin(ang));
        c.labels.push_back(static_cast<std::uint32_t>(k ^ (k >> 1)));
    }
    finalize(c);
    return c;
}

// Square 16QAM, per-axis Gray: first two bits select I, last two select Q,
// 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3 (before scaling).
Constellation make_qam16() {
    Constellation c;
    c.order = 16;
    auto level = [](std::uint32_t g) -> double {
        switch (g) {
            case 0b00: return -3.0;
            case 0b01: return -1.0;
            case 0b11: return 1.0;
            default: return 3.0;  // 0b10
        }
    };
    c.points.reserve(16);
    c.labels.reserve(16);
    for (std::uint32_t label = 0; label < 16; ++label) {
        const std::uint32_t gi = (label >> 2) & 0x3;
        const std::uint32_t gq = label & 0x3;
        c.points.emplace_back(level(gi), level(gq));
        c.labels.push_back(label);
    }
    finalize(c);
    return c;
}

}  // namespace

Constellation build_constellation(int order) {
    return build_constellation(order, kCircular8RingRatio);
}

Constellation build_constellation(int order, double ring_ratio) {
    switch (order) {
        case 2: return make_bpsk();
        case 4: return make_qpsk();
        case 8: return make_circular8(ring_ratio);
        case 16: return make_qam16();
        default:
            throw ConfigError("unsupported QAM order " + std::to_string(order) +
                              " (supported: 2, 4, 8, 16)");
    }
}

cvec map_bits(const std::vector<std::uint8_t>& bits, const Constellation& c) {
    const std::size_t k = static_cast<std::size_t>(c.bits_per_symbol);
    if (bits.size() % k != 0)
        throw FramingError("bit count " + std::to_string(bits.size()) +
                           " not divisible by " + std::to_string(k));
    cvec out;
    out.reserve(bits.size() / k);
    for (std::size_t i = 0; i < bits.size(); i += k) {
        std::uint32_t label = 0;
        for (std::size_t j = 0; j < k; ++j) label = (label << 1) | (bits[i + j] & 1u);
        out.push_back(c.point_for_label(label));
    }
    return out;
}

int nearest_point(const cplx& y, const Constellation& c) {
    int best = 0;
    double best_d = std::norm(y - c.points[0]);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const double d = std::norm(y - c.points[i]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::uint32_t demap_hard(const cplx& y, const Constellation& c) {
    return c.labels[static_cast<std::size_t>(nearest_point(y, c))];
}

void append_label_bits(std::uint32_t label, int bits_per_symbol,
                       std::vector<std::uint8_t>& out) {
    for (int j = bits_per_symbol - 1; j >= 0; --j)
        out.push_back(static_cast<std::uint8_t>((label >> j) & 1u));
}

}  // namespace ftn
