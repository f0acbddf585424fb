#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ftn/fft.hpp"
#include "ftn/rng.hpp"

using namespace ftn;

namespace {

cvec random_vec(Rng& rng, std::size_t n) {
    cvec x(n);
    for (auto& v : x) v = cplx(rng.next_gaussian(), rng.next_gaussian());
    return x;
}

double max_err(const cvec& a, const cvec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("pow2 helpers") {
    CHECK(is_pow2(1));
    CHECK(is_pow2(256));
    CHECK(!is_pow2(0));
    CHECK(!is_pow2(12));
    CHECK(next_pow2(1) == 1);
    CHECK(next_pow2(5) == 8);
    CHECK(next_pow2(256) == 256);
    CHECK(next_pow2(257) == 512);
}

TEST_CASE("ifft inverts fft") {
    Rng rng(1);
    for (std::size_t n : {2, 8, 256, 1024}) {
        const cvec x = random_vec(rng, n);
        cvec y = x;
        fft(y);
        ifft(y);
        CHECK(max_err(x, y) < 1e-9);
    }
}

TEST_CASE("fft matches direct transform") {
    Rng rng(2);
    const cvec x = random_vec(rng, 16);
    cvec y = x;
    fft(y);
    CHECK(max_err(y, dft_direct(x)) < 1e-10);
    cvec z = x;
    ifft(z);
    CHECK(max_err(z, dft_direct(x, true)) < 1e-10);
}

TEST_CASE("direct transform handles non-pow2 lengths") {
    Rng rng(3);
    const cvec x = random_vec(rng, 7);
    const cvec X = dft_direct(x);
    const cvec back = dft_direct(X, true);
    CHECK(max_err(x, back) < 1e-10);
}

TEST_CASE("unscaled forward transform preserves energy up to n") {
    Rng rng(4);
    const std::size_t n = 64;
    const cvec x = random_vec(rng, n);
    cvec X = x;
    fft(X);
    double ex = 0.0, eX = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ex += std::norm(x[i]);
        eX += std::norm(X[i]);
    }
    CHECK(eX == doctest::Approx(static_cast<double>(n) * ex).epsilon(1e-10));
}

TEST_CASE("single tone transforms to a delta") {
    const std::size_t n = 32;
    cvec x(n);
    for (std::size_t k = 0; k < n; ++k)
        x[k] = std::polar(1.0, 2.0 * 3.14159265358979323846 * 3.0 * k / n);
    fft(x);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == 3)
            CHECK(std::abs(x[k] - cplx(static_cast<double>(n), 0.0)) < 1e-9);
        else
            CHECK(std::abs(x[k]) < 1e-9);
    }
}
