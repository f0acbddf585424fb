#pragma once

#include <cstdint>
#include <vector>

#include "ftn/constellation.hpp"
#include "ftn/modem.hpp"
#include "ftn/precoder.hpp"
#include "ftn/types.hpp"

namespace ftn {

// Channel state learned from training blocks.
struct RxEstimate {
    cvec h;            // gain per occupied bin
    rvec sigma2;       // post-equalization noise variance per occupied bin
    rvec sigma2_band;  // per band: sum of the band's sigma2 divided by n
};

struct DetectorConfig {
    // Survivor count per band; empty means "equal to the band's QAM order".
    std::vector<int> survivors_per_band;
    bool exhaustive_flag = false;  // keep every path, exact ML
    bool reverse_order = false;    // process positions high to low
};

struct BandCount {
    long long bit_errors = 0;
    long long bits = 0;
    double ber = 0.0;
};

struct BerReport {
    std::vector<BandCount> per_band;
    BandCount overall;
    double flatness = 1.0;  // max per-band BER / mean per-band BER; 1 if all zero
};

// h[b] = mean over blocks of rx/known per bin; sigma2[b] = sample variance of
// rx/h - known across blocks. Needs >= 2 blocks (ConfigError), equal lengths
// (FramingError); |h| below 1e-12 raises DegenerateChannelError naming the bin.
RxEstimate estimate_channel(const std::vector<cvec>& rx_ts, const cvec& known_ts,
                            const BandPlan& plan);

// y[b] / h[b] per bin.
cvec zf_equalize(const cvec& y, const RxEstimate& est);

// Per band: (sum of that band's per-bin variances) / n. The divisor is the
// original subcarrier count n, not the compressed count m: the inverse
// transform spreads the band's noise over n positions.
rvec band_noise_variance(const rvec& sigma2, const BandPlan& plan);

struct DetectResult {
    std::vector<int> indices;       // chosen constellation point per position
    cvec symbols;
    std::vector<std::uint8_t> bits;
};

// Per-stage search tables for one transform at one noise level: processing
// order, the columns in observation space, and for every stage a Cholesky
// factor of (undecided-tail signal covariance + sigma2 * I). Survivor
// ranking whitens the running residual against this covariance, so a prefix
// scores by how plausibly noise plus the remaining positions could still
// explain the remainder; by the last stage the score reduces to the plain
// residual norm over sigma2. This is why detection needs the per-band noise
// variance up front. Build once per (transform, variance) and reuse across
// blocks.
struct DetectorTables {
    int n = 0;
    int m = 0;
    bool reverse_order = false;
    std::vector<int> perm;   // stage -> position
    cvec cols;               // stage-ordered columns, stride m
    cvec chol;               // per-stage lower Cholesky factors, stride m*m
    cvec gcol;               // per-stage whitened current column, stride m
    rvec gnorm;              // per-stage squared norm of gcol
};

// sigma2 <= 0 degenerates to a small fixed ridge (noiseless detection).
DetectorTables make_detector_tables(const NomMatrix& nom, double sigma2,
                                    bool reverse_order = false);

// Breadth-first tree search over positions 0..n-1 keeping the best
// `survivors` paths per stage, ranked by the tail-whitened residual score
// from DetectorTables; with exhaustive set (or survivors >= Q^n) every path
// is kept and the result is the exact minimizer of ||y_eq - A*s||^2,
// independent of sigma_hat. The final path always minimizes the exact
// metric (||y_eq - A*s||^2 - ||y_eq||^2)/sigma_hat over the kept set. Equal
// scores and equal metrics resolve to the lexicographically smallest index
// sequence (in processing order). z = A^H * y_eq. sigma_hat <= 0 is treated
// as noiseless.
DetectResult viterbi_detect(const cvec& z, const NomMatrix& nom, double sigma_hat,
                            const Constellation& c, int survivors,
                            bool exhaustive = false, bool reverse_order = false);

// Same, with prebuilt tables (tables.reverse_order selects the order; the
// tables' variance should match sigma_hat).
DetectResult viterbi_detect(const cvec& z, const NomMatrix& nom,
                            const DetectorTables& tables, double sigma_hat,
                            const Constellation& c, int survivors,
                            bool exhaustive = false);

// Aggregate error/bit counts into a report; sizes must match band count.
BerReport make_ber_report(const std::vector<long long>& errors,
                          const std::vector<long long>& bits);

// Streams are concatenated blocks, each block laid out band 1..L with
// n * log2(q) bits per band. Length mismatch or a length not divisible by
// the block size raises FramingError.
BerReport count_errors(const std::vector<std::uint8_t>& tx_bits,
                       const std::vector<std::uint8_t>& rx_bits,
                       const BandPlan& plan);

}  // namespace ftn
