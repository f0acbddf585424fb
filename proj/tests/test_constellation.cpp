#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

#include "ftn/constellation.hpp"
#include "ftn/errors.hpp"
#include "ftn/rng.hpp"

using namespace ftn;

namespace {

int bit_diff(std::uint32_t a, std::uint32_t b) { return std::popcount(a ^ b); }

double mean_power(const Constellation& c) {
    double p = 0.0;
    for (const auto& pt : c.points) p += std::norm(pt);
    return p / static_cast<double>(c.order);
}

}  // namespace

TEST_CASE("supported orders are well formed") {
    for (int q : {2, 4, 8, 16}) {
        const auto c = build_constellation(q);
        CHECK(c.order == q);
        CHECK((1 << c.bits_per_symbol) == q);
        CHECK(c.points.size() == static_cast<std::size_t>(q));
        CHECK(c.labels.size() == static_cast<std::size_t>(q));
        CHECK(mean_power(c) == doctest::Approx(1.0).epsilon(1e-12));

        std::set<std::pair<double, double>> distinct;
        for (const auto& pt : c.points) distinct.insert({pt.real(), pt.imag()});
        CHECK(distinct.size() == static_cast<std::size_t>(q));

        std::set<std::uint32_t> labels(c.labels.begin(), c.labels.end());
        CHECK(labels.size() == static_cast<std::size_t>(q));
        CHECK(*labels.rbegin() == static_cast<std::uint32_t>(q - 1));
    }
}

TEST_CASE("unsupported orders are rejected") {
    for (int q : {0, 1, 3, 6, 32, 64}) CHECK_THROWS_AS(build_constellation(q), ConfigError);
}

TEST_CASE("antipodal pair") {
    const auto c = build_constellation(2);
    CHECK(c.points[0] == cplx(1.0, 0.0));
    CHECK(c.points[1] == cplx(-1.0, 0.0));
}

TEST_CASE("square QPSK points with a Gray cycle") {
    const auto c = build_constellation(4);
    const double h = 1.0 / std::sqrt(2.0);
    std::set<std::pair<double, double>> expect = {{h, h}, {-h, h}, {-h, -h}, {h, -h}};
    for (const auto& pt : c.points) {
        bool found = false;
        for (const auto& e : expect)
            if (std::abs(pt.real() - e.first) < 1e-12 && std::abs(pt.imag() - e.second) < 1e-12)
                found = true;
        CHECK(found);
    }
    // Walking the four points by angle, consecutive labels differ in one bit.
    std::vector<int> order_by_angle(4);
    std::iota(order_by_angle.begin(), order_by_angle.end(), 0);
    std::sort(order_by_angle.begin(), order_by_angle.end(), [&](int a, int b) {
        return std::arg(c.points[a]) < std::arg(c.points[b]);
    });
    for (int i = 0; i < 4; ++i) {
        const auto a = c.labels[order_by_angle[i]];
        const auto b = c.labels[order_by_angle[(i + 1) % 4]];
        CHECK(bit_diff(a, b) == 1);
    }
}

TEST_CASE("circular 8QAM ring geometry") {
    const auto c = build_constellation(8);
    std::vector<double> radii;
    for (const auto& pt : c.points) radii.push_back(std::abs(pt));
    std::sort(radii.begin(), radii.end());
    const double r1 = radii[0], r2 = radii[7];
    for (int i = 0; i < 4; ++i) CHECK(radii[i] == doctest::Approx(r1).epsilon(1e-12));
    for (int i = 4; i < 8; ++i) CHECK(radii[i] == doctest::Approx(r2).epsilon(1e-12));
    CHECK(r2 / r1 == doctest::Approx(kCircular8RingRatio).epsilon(1e-12));
    // Unit power fixes the radii: 4r1^2 + 4r2^2 = 8.
    const double r1_expect = std::sqrt(2.0 / (1.0 + kCircular8RingRatio * kCircular8RingRatio));
    CHECK(r1 == doctest::Approx(r1_expect).epsilon(1e-12));
    // Inner points on the axes, outer points on the diagonals.
    for (const auto& pt : c.points) {
        const bool inner = std::abs(std::abs(pt) - r1) < 1e-9;
        if (inner)
            CHECK(std::min(std::abs(pt.real()), std::abs(pt.imag())) < 1e-9);
        else
            CHECK(std::abs(std::abs(pt.real()) - std::abs(pt.imag())) < 1e-9);
    }
}

TEST_CASE("custom 8QAM ring ratio is honored") {
    const auto c = build_constellation(8, 2.5);
    std::vector<double> radii;
    for (const auto& pt : c.points) radii.push_back(std::abs(pt));
    std::sort(radii.begin(), radii.end());
    CHECK(radii[7] / radii[0] == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(mean_power(c) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("square 16QAM grid is Gray in both axes") {
    const auto c = build_constellation(16);
    const double s = 1.0 / std::sqrt(10.0);
    // All points on the {-3,-1,1,3}/sqrt(10) grid.
    for (const auto& pt : c.points) {
        const double re = pt.real() / s, im = pt.imag() / s;
        CHECK(std::abs(std::abs(re) - 1.0) * std::abs(std::abs(re) - 3.0) < 1e-9);
        CHECK(std::abs(std::abs(im) - 1.0) * std::abs(std::abs(im) - 3.0) < 1e-9);
    }
    // Grid neighbors (distance 2s) differ in exactly one label bit.
    int neighbor_pairs = 0;
    for (int i = 0; i < 16; ++i)
        for (int j = i + 1; j < 16; ++j) {
            if (std::abs(std::abs(c.points[i] - c.points[j]) - 2.0 * s) < 1e-9) {
                CHECK(bit_diff(c.labels[i], c.labels[j]) == 1);
                ++neighbor_pairs;
            }
        }
    CHECK(neighbor_pairs == 24);
}

TEST_CASE("map and demap invert each other for every label") {
    for (int q : {2, 4, 8, 16}) {
        const auto c = build_constellation(q);
        for (int i = 0; i < q; ++i) {
            std::vector<std::uint8_t> bits;
            append_label_bits(c.labels[i], c.bits_per_symbol, bits);
            const cvec sym = map_bits(bits, c);
            REQUIRE(sym.size() == 1);
            CHECK(std::abs(sym[0] - c.points[i]) < 1e-15);
            CHECK(demap_hard(sym[0], c) == c.labels[i]);
        }
    }
}

TEST_CASE("map_bits examples") {
    const auto q4 = build_constellation(4);
    const cvec two = map_bits({0, 0, 0, 1}, q4);
    REQUIRE(two.size() == 2);
    CHECK(std::abs(two[0] - q4.point_for_label(0)) < 1e-15);
    CHECK(std::abs(two[1] - q4.point_for_label(1)) < 1e-15);

    const auto q2 = build_constellation(2);
    const cvec one = map_bits({0}, q2);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == cplx(1.0, 0.0));

    CHECK_THROWS_AS(map_bits({0, 1, 0}, q4), FramingError);
}

TEST_CASE("append_label_bits is MSB first") {
    std::vector<std::uint8_t> bits;
    append_label_bits(0b1101u, 4, bits);
    CHECK(bits == std::vector<std::uint8_t>{1, 1, 0, 1});
}

TEST_CASE("nearest_point matches a brute-force scan") {
    Rng rng(5);
    for (int q : {2, 4, 8, 16}) {
        const auto c = build_constellation(q);
        for (int t = 0; t < 200; ++t) {
            const cplx y(2.0 * rng.next_gaussian(), 2.0 * rng.next_gaussian());
            int best = 0;
            double best_d = std::norm(y - c.points[0]);
            for (int i = 1; i < q; ++i) {
                const double d = std::norm(y - c.points[i]);
                if (d < best_d) {
                    best = i;
                    best_d = d;
                }
            }
            CHECK(nearest_point(y, c) == best);
        }
    }
}

TEST_CASE("equidistant demap resolves to the lowest index") {
    const auto c = build_constellation(2);
    CHECK(demap_hard(cplx(0.0, 0.0), c) == c.labels[0]);
}

TEST_CASE("high-SNR QPSK decisions are error free") {
    Rng rng(6);
    const auto c = build_constellation(4);
    for (int t = 0; t < 1000; ++t) {
        const int idx = static_cast<int>(rng.next_below(4));
        const cplx y = c.points[idx] + cplx(0.01 * rng.next_gaussian(), 0.01 * rng.next_gaussian());
        CHECK(demap_hard(y, c) == c.labels[idx]);
    }
}
