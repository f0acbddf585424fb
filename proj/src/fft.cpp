#include "ftn/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace ftn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;

void transform(cvec& x, int sign) {
    const std::size_t n = x.size();
    if (n <= 1) return;
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = x[i + k];
                const cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}
}  // namespace

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft(cvec& x) { transform(x, -1); }

void ifft(cvec& x) {
    transform(x, +1);
    const double inv = 1.0 / static_cast<double>(x.size());
    for (auto& v : x) v *= inv;
}

cvec dft_direct(const cvec& x, bool inverse) {
    const std::size_t n = x.size();
    cvec out(n, cplx(0.0, 0.0));
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sign * kTwoPi * static_cast<double>(k * j) / static_cast<double>(n);
            acc += x[j] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

}  // namespace ftn
