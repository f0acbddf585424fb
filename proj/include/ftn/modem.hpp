#pragma once

#include <vector>

#include "ftn/types.hpp"

namespace ftn {

// One sub-band: n original subcarriers squeezed to m, carrying order-q QAM.
struct BandSpec {
    int n = 0;
    int m = 0;
    int q = 0;
};

// Multi-band configuration. Bands are laid out low to high frequency; band
// coefficients occupy b_total consecutive data bins starting at bin 1.
struct BandPlan {
    int l_bands = 0;
    int v_total = 0;
    double alpha = 1.0;          // requested compression factor
    std::vector<BandSpec> per_band;
    int b_total = 0;             // sum of per-band m

    double alpha_effective() const {
        return static_cast<double>(b_total) / static_cast<double>(v_total);
    }
};

// Validates: v_total divisible by l_bands, qam_orders size l_bands and
// monotone non-increasing, alpha in (0, 1]. Per band m = round(alpha * n),
// clamped to [1, n]. Throws ConfigError on violations.
BandPlan make_band_plan(int v_total, int l_bands, double alpha,
                        const std::vector<int>& qam_orders);

// OFDM framing. n_fft must be a power of two (radix-2 transforms).
struct FrameConfig {
    int n_fft = 256;
    int cp_len = 8;
    int n_ts = 20;
    int n_payload = 200;
    double sample_rate = 26e9;
};

// Throws ConfigError if the plan does not fit the frame:
// 2*b_total + 2 <= n_fft, n_fft a power of two, cp_len >= 0, n_payload >= 1.
void validate_frame(const BandPlan& plan, const FrameConfig& cfg);

// data_bins occupy bins 1..B; bin 0 and bin n_fft/2 zero; bins n_fft-B..n_fft-1
// carry the mirrored conjugates so the time signal is real.
cvec hermitian_spectrum(const cvec& data_bins, int n_fft);

// Per-band coefficient blocks concatenated low to high onto bins 1..b_total.
// Throws ConfigError if the plan does not fit, FramingError on per-band
// length mismatch.
cvec assemble_spectrum(const std::vector<cvec>& coeffs, const BandPlan& plan,
                       const FrameConfig& cfg);

// Inverse transform + cyclic prefix. Throws IntegrityError if the spectrum is
// not Hermitian (imaginary residue above 1e-9 relative to peak).
rvec ofdm_modulate(const cvec& spectrum, const FrameConfig& cfg);

// CP removal + forward transform; returns bins 1..b_total. Throws
// FramingError unless samples.size() == n_fft + cp_len.
cvec ofdm_demodulate(const rvec& samples, int b_total, const FrameConfig& cfg);

// Compressed-spacing reference generator: X[k] = (1/n_fft_direct) *
// sum_v s[v] * exp(i*2*pi*alpha*v*k/l_samples), k = 0..l_samples-1.
// Spectrum-validation path only; the precoded chain is the product.
// Preconditions (ConfigError): alpha in (0,1], n_fft_direct >=
// floor(l_samples/alpha)+1, s.size() <= n_fft_direct.
cvec generate_ftn_direct(const cvec& s, double alpha, int l_samples,
                         int n_fft_direct);

// Fixed pseudo-random 4QAM training pattern for bins 1..b_total. The same
// pattern repeats in every training block, which makes the channel
// estimator's per-bin residual mean exactly zero.
cvec training_bins(int b_total);

// bits/second net of CP and training overhead; independent of alpha.
double line_rate(const BandPlan& plan, const FrameConfig& cfg);

// b_total * sample_rate / n_fft.
double occupied_bandwidth(const BandPlan& plan, const FrameConfig& cfg);

}  // namespace ftn
