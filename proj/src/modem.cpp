#include "ftn/modem.hpp"

#include <cmath>
#include <string>

#include "ftn/constellation.hpp"
#include "ftn/errors.hpp"
#include "ftn/fft.hpp"
#include "ftn/rng.hpp"

namespace ftn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

BandPlan make_band_plan(int v_total, int l_bands, double alpha,
                        const std::vector<int>& qam_orders) {
    if (l_bands < 1) throw ConfigError("band count must be >= 1");
    if (v_total < 1 || v_total % l_bands != 0)
        throw ConfigError("subcarrier total " + std::to_string(v_total) +
                          " not divisible by " + std::to_string(l_bands) + " bands");
    if (static_cast<int>(qam_orders.size()) != l_bands)
        throw ConfigError("expected " + std::to_string(l_bands) + " QAM orders, got " +
                          std::to_string(qam_orders.size()));
    if (!(alpha > 0.0) || alpha > 1.0)
        throw ConfigError("compression factor must be in (0, 1]");
    for (std::size_t i = 1; i < qam_orders.size(); ++i)
        if (qam_orders[i] > qam_orders[i - 1])
            throw ConfigError("QAM orders must be non-increasing across bands");

    BandPlan plan;
    plan.l_bands = l_bands;
    plan.v_total = v_total;
    plan.alpha = alpha;
    const int n = v_total / l_bands;
    for (int q : qam_orders) {
        BandSpec b;
        b.n = n;
        b.m = static_cast<int>(std::lround(alpha * n));
        if (b.m < 1) b.m = 1;
        if (b.m > n) b.m = n;
        b.q = q;
        plan.per_band.push_back(b);
        plan.b_total += b.m;
    }
    return plan;
}

void validate_frame(const BandPlan& plan, const FrameConfig& cfg) {
    if (!is_pow2(static_cast<std::size_t>(cfg.n_fft)))
        throw ConfigError("FFT size must be a power of two, got " +
                          std::to_string(cfg.n_fft));
    if (cfg.cp_len < 0) throw ConfigError("cyclic prefix length must be >= 0");
    if (cfg.n_payload < 1) throw ConfigError("payload block count must be >= 1");
    if (cfg.n_ts < 0) throw ConfigError("training block count must be >= 0");
    if (2 * plan.b_total + 2 > cfg.n_fft)
        throw ConfigError("plan occupies " + std::to_string(plan.b_total) +
                          " bins; FFT size " + std::to_string(cfg.n_fft) +
                          " fits at most " + std::to_string((cfg.n_fft - 2) / 2));
}

cvec hermitian_spectrum(const cvec& data_bins, int n_fft) {
    const int b = static_cast<int>(data_bins.size());
    if (2 * b + 2 > n_fft)
        throw ConfigError(std::to_string(b) + " data bins do not fit an FFT of size " +
                          std::to_string(n_fft));
    cvec spec(static_cast<std::size_t>(n_fft), cplx(0.0, 0.0));
    for (int k = 0; k < b; ++k) {
        spec[static_cast<std::size_t>(1 + k)] = data_bins[static_cast<std::size_t>(k)];
        spec[static_cast<std::size_t>(n_fft - 1 - k)] =
            std::conj(data_bins[static_cast<std::size_t>(k)]);
    }
    return spec;
}

cvec assemble_spectrum(const std::vector<cvec>& coeffs, const BandPlan& plan,
                       const FrameConfig& cfg) {
    validate_frame(plan, cfg);
    if (static_cast<int>(coeffs.size()) != plan.l_bands)
        throw FramingError("expected " + std::to_string(plan.l_bands) +
                           " coefficient blocks, got " + std::to_string(coeffs.size()));
    cvec data;
    data.reserve(static_cast<std::size_t>(plan.b_total));
    for (int l = 0; l < plan.l_bands; ++l) {
        const auto& band = coeffs[static_cast<std::size_t>(l)];
        if (static_cast<int>(band.size()) != plan.per_band[static_cast<std::size_t>(l)].m)
            throw FramingError("band " + std::to_string(l + 1) + " has " +
                               std::to_string(band.size()) + " coefficients, plan says " +
                               std::to_string(plan.per_band[static_cast<std::size_t>(l)].m));
        data.insert(data.end(), band.begin(), band.end());
    }
    return hermitian_spectrum(data, cfg.n_fft);
}

rvec ofdm_modulate(const cvec& spectrum, const FrameConfig& cfg) {
    if (static_cast<int>(spectrum.size()) != cfg.n_fft)
        throw FramingError("spectrum length " + std::to_string(spectrum.size()) +
                           ", FFT size " + std::to_string(cfg.n_fft));
    cvec t = spectrum;
    ifft(t);
    double peak = 0.0, residue = 0.0;
    for (const auto& v : t) {
        peak = std::max(peak, std::abs(v.real()));
        residue = std::max(residue, std::abs(v.imag()));
    }
    if (residue > 1e-9 * std::max(1.0, peak))
        throw IntegrityError("spectrum is not Hermitian: imaginary residue " +
                             std::to_string(residue));
    rvec out;
    out.reserve(t.size() + static_cast<std::size_t>(cfg.cp_len));
    for (int k = cfg.n_fft - cfg.cp_len; k < cfg.n_fft; ++k)
        out.push_back(t[static_cast<std::size_t>(k)].real());
    for (const auto& v : t) out.push_back(v.real());
    return out;
}

cvec ofdm_demodulate(const rvec& samples, int b_total, const FrameConfig& cfg) {
    const std::size_t want = static_cast<std::size_t>(cfg.n_fft + cfg.cp_len);
    if (samples.size() != want)
        throw FramingError("block length " + std::to_string(samples.size()) +
                           ", expected " + std::to_string(want));
    cvec t(static_cast<std::size_t>(cfg.n_fft));
    for (int k = 0; k < cfg.n_fft; ++k)
        t[static_cast<std::size_t>(k)] =
            cplx(samples[static_cast<std::size_t>(k + cfg.cp_len)], 0.0);
    fft(t);
    return cvec(t.begin() + 1, t.begin() + 1 + b_total);
}

cvec generate_ftn_direct(const cvec& s, double alpha, int l_samples,
                         int n_fft_direct) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw ConfigError("compression factor must be in (0, 1]");
    if (l_samples < 1) throw ConfigError("sample count must be >= 1");
    const int min_fft = static_cast<int>(std::floor(l_samples / alpha)) + 1;
    if (n_fft_direct < min_fft)
        throw ConfigError("direct-path FFT size " + std::to_string(n_fft_direct) +
                          " below minimum " + std::to_string(min_fft));
    if (static_cast<int>(s.size()) > n_fft_direct)
        throw ConfigError("symbol count " + std::to_string(s.size()) +
                          " exceeds FFT size " + std::to_string(n_fft_direct));
    cvec out(static_cast<std::size_t>(l_samples), cplx(0.0, 0.0));
    const double inv = 1.0 / static_cast<double>(n_fft_direct);
    for (int k = 0; k < l_samples; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t v = 0; v < s.size(); ++v) {
            const double ang = kTwoPi * alpha * static_cast<double>(v) *
                               static_cast<double>(k) / static_cast<double>(l_samples);
            acc += s[v] * cplx(std::cos(ang), std::sin(ang));
        }
        out[static_cast<std::size_t>(k)] = acc * inv;
    }
    return out;
}

cvec training_bins(int b_total) {
    const Constellation qpsk = build_constellation(4);
    Rng rng(derive_seed(0, 0, 0x5453));
    cvec out;
    out.reserve(static_cast<std::size_t>(b_total));
    for (int k = 0; k < b_total; ++k)
        out.push_back(qpsk.points[rng.next_below(4)]);
    return out;
}

double line_rate(const BandPlan& plan, const FrameConfig& cfg) {
    double bits_per_block = 0.0;
    for (const auto& b : plan.per_band)
        bits_per_block += static_cast<double>(b.n) *
                          std::log2(static_cast<double>(b.q));
    const double block_fraction =
        (cfg.n_ts + cfg.n_payload) > 0
            ? static_cast<double>(cfg.n_payload) /
                  static_cast<double>(cfg.n_payload + cfg.n_ts)
            : 1.0;
    return cfg.sample_rate * bits_per_block /
           static_cast<double>(cfg.n_fft + cfg.cp_len) * block_fraction;
}

double occupied_bandwidth(const BandPlan& plan, const FrameConfig& cfg) {
    return static_cast<double>(plan.b_total) * cfg.sample_rate /
           static_cast<double>(cfg.n_fft);
}

}  // namespace ftn
