#pragma once

#include <cmath>
#include <cstdint>

namespace ftn {

// splitmix64; used both as a stream generator and as the seed mixer for
// per-frame substreams. Self-contained so that draws are bit-identical
// across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in {0, ..., n-1}
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n);
    }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    // standard normal via Box-Muller (pairs cached)
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Deterministic substream seed from (master, index, salt). Distinct salts keep
// payload bits, channel noise, and test draws decorrelated.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::uint64_t salt = 0) {
    Rng mix(master ^ (0x6a09e667f3bcc909ULL + salt));
    mix.next_u64();
    std::uint64_t a = mix.next_u64() ^ (index * 0xd1342543de82ef95ULL + 1);
    Rng mix2(a);
    mix2.next_u64();
    return mix2.next_u64();
}

}  // namespace ftn
