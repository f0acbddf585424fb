#pragma once

#include "ftn/types.hpp"

namespace ftn {

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

// In-place radix-2 DIT transform. Forward uses exp(-i2pi kn/N), no scaling;
// inverse uses exp(+i2pi kn/N) and divides by N. Length must be a power of two.
void fft(cvec& x);
void ifft(cvec& x);

// O(n^2) reference transform for arbitrary lengths (test oracles, CAZAC checks).
cvec dft_direct(const cvec& x, bool inverse = false);

}  // namespace ftn
