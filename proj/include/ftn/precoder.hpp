#pragma once

#include <vector>

#include "ftn/types.hpp"

namespace ftn {

// Row-truncated unitary circulant. entries is m x n (rows 0..m-1 of the full
// transform); gram = entries^H * entries is the n x n interference matrix the
// detector works from. Immutable after construction.
struct NomMatrix {
    int n = 0;
    int m = 0;
    std::vector<cvec> entries;  // m rows of length n
    std::vector<cvec> gram;     // n rows of length n
};

// Length-n constant-amplitude zero-autocorrelation base sequence (Zadoff-Chu,
// root 1, scaled 1/sqrt(n)). Generator row of the circulant transform.
cvec make_cazac_sequence(int n);

// Unitary circulant matrix: row j is the base sequence cyclically shifted so
// that U[j][k] = z[(k - j) mod n]. Throws ConfigError for n < 1.
std::vector<cvec> make_oct(int n);

// First m rows of make_oct(n), gram cached. Throws ConfigError unless
// 1 <= m <= n.
NomMatrix make_nom(int n, int m);

// entries * s: n symbols in, m coefficients out. Throws FramingError on
// length mismatch.
cvec precode(const cvec& s, const NomMatrix& nom);

// entries^H * a: m coefficients in, n soft values out. For a = precode(s) + w
// this equals gram*s + entries^H*w, the detector's observation model.
cvec inverse_precode(const cvec& a, const NomMatrix& nom);

}  // namespace ftn
