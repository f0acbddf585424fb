#include "ftn/precoder.hpp"

#include <cmath>
#include <string>

#include "ftn/errors.hpp"

namespace ftn {

namespace {
constexpr double kPi = 3.141592653589793238462643;
}

cvec make_cazac_sequence(int n) {
    if (n < 1) throw ConfigError("transform size must be >= 1, got " + std::to_string(n));
    cvec z(static_cast<std::size_t>(n));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        // Zadoff-Chu, root 1: odd n uses k(k+1), even n uses k^2. Both give
        // constant-modulus DFT (zero periodic autocorrelation), hence a
        // unitary circulant.
        const double num = (n % 2 == 1) ? static_cast<double>(k) * (k + 1)
                                        : static_cast<double>(k) * k;
        const double phase = -kPi * num / static_cast<double>(n);
        z[static_cast<std::size_t>(k)] =
            scale * cplx(std::cos(phase), std::sin(phase));
    }
    return z;
}

std::vector<cvec> make_oct(int n) {
    const cvec z = make_cazac_sequence(n);
    std::vector<cvec> u(static_cast<std::size_t>(n), cvec(static_cast<std::size_t>(n)));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            u[j][k] = z[static_cast<std::size_t>(((k - j) % n + n) % n)];
    return u;
}

NomMatrix make_nom(int n, int m) {
    if (n < 1) throw ConfigError("transform size must be >= 1, got " + std::to_string(n));
    if (m < 1 || m > n)
        throw ConfigError("compressed size " + std::to_string(m) +
                          " outside [1, " + std::to_string(n) + "]");
    NomMatrix nom;
    nom.n = n;
    nom.m = m;
    auto full = make_oct(n);
    nom.entries.assign(full.begin(), full.begin() + m);
    nom.gram.assign(static_cast<std::size_t>(n), cvec(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cplx acc(0.0, 0.0);
            for (int r = 0; r < m; ++r)
                acc += std::conj(nom.entries[r][a]) * nom.entries[r][b];
            nom.gram[a][b] = acc;
        }
    return nom;
}

cvec precode(const cvec& s, const NomMatrix& nom) {
    if (static_cast<int>(s.size()) != nom.n)
        throw FramingError("precode input length " + std::to_string(s.size()) +
                           ", matrix expects " + std::to_string(nom.n));
    cvec out(static_cast<std::size_t>(nom.m));
    for (int r = 0; r < nom.m; ++r) {
        cplx acc(0.0, 0.0);
        for (int k = 0; k < nom.n; ++k) acc += nom.entries[r][k] * s[k];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

cvec inverse_precode(const cvec& a, const NomMatrix& nom) {
    if (static_cast<int>(a.size()) != nom.m)
        throw FramingError("inverse precode input length " + std::to_string(a.size()) +
                           ", matrix expects " + std::to_string(nom.m));
    cvec out(static_cast<std::size_t>(nom.n), cplx(0.0, 0.0));
    for (int r = 0; r < nom.m; ++r) {
        const cplx ar = a[static_cast<std::size_t>(r)];
        for (int k = 0; k < nom.n; ++k) out[k] += std::conj(nom.entries[r][k]) * ar;
    }
    return out;
}

}  // namespace ftn
