#include "ftn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ftn/errors.hpp"
#include "ftn/fft.hpp"
#include "ftn/rng.hpp"

namespace ftn {

namespace {
constexpr double kLn2 = 0.6931471805599453094172321;
constexpr double kTwoPi = 6.283185307179586476925287;
}

ChannelProfile flat_profile(double noise_psd, double rop_dbm) {
    ChannelProfile p;
    p.kind = ProfileKind::flat;
    p.noise_psd = noise_psd;
    p.rop_dbm = rop_dbm;
    return p;
}

ChannelProfile gaussian_profile(double f_3db, double noise_psd, double rop_dbm) {
    if (!(f_3db > 0.0)) throw ConfigError("3 dB frequency must be positive");
    ChannelProfile p;
    p.kind = ProfileKind::gaussian_lowpass;
    p.f_3db = f_3db;
    p.noise_psd = noise_psd;
    p.rop_dbm = rop_dbm;
    return p;
}

ChannelProfile measured_20km_profile(double noise_psd, double rop_dbm) {
    ChannelProfile p;
    p.kind = ProfileKind::tabulated;
    p.table = {
        {0.0, 0.0},      {2e9, -1.6},     {4e9, -3.3},     {6e9, -5.0},
        {8e9, -6.6},     {9e9, -7.5},     {10e9, -8.5},    {10.5e9, -10.5},
        {11e9, -13.5},   {11.5e9, -17.5}, {12e9, -22.5},   {12.5e9, -28.0},
        {13e9, -34.0},
    };
    p.noise_psd = noise_psd;
    p.rop_dbm = rop_dbm;
    return p;
}

ChannelProfile load_channel_table(const std::string& path, double noise_psd,
                                  double rop_dbm) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open channel table " + path);
    ChannelProfile p;
    p.kind = ProfileKind::tabulated;
    p.noise_psd = noise_psd;
    p.rop_dbm = rop_dbm;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double f, g;
        if (!(ls >> f)) continue;  // blank or comment-only line
        if (!(ls >> g))
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": expected two columns (frequency_hz gain_db)");
        std::string extra;
        if (ls >> extra)
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": trailing content '" + extra + "'");
        p.table.emplace_back(f, g);
    }
    if (p.table.size() < 2)
        throw ParseError(path + ": need at least 2 table rows, got " +
                         std::to_string(p.table.size()));
    for (std::size_t i = 1; i < p.table.size(); ++i)
        if (!(p.table[i].first > p.table[i - 1].first))
            throw ConfigError(path + ": frequencies must be strictly increasing");
    return p;
}

cplx profile_gain(double f, const ChannelProfile& p) {
    switch (p.kind) {
        case ProfileKind::flat:
            return cplx(1.0, 0.0);
        case ProfileKind::gaussian_lowpass: {
            const double x = f / p.f_3db;
            return cplx(std::exp(-0.5 * kLn2 * x * x), 0.0);
        }
        case ProfileKind::tabulated: {
            const auto& t = p.table;
            double g_db;
            if (f <= t.front().first) {
                g_db = t.front().second;
            } else if (f >= t.back().first) {
                g_db = t.back().second;
            } else {
                auto hi = std::upper_bound(
                    t.begin(), t.end(), f,
                    [](double v, const auto& row) { return v < row.first; });
                auto lo = hi - 1;
                const double w = (f - lo->first) / (hi->first - lo->first);
                g_db = lo->second + w * (hi->second - lo->second);
            }
            return cplx(std::pow(10.0, g_db / 20.0), 0.0);
        }
    }
    return cplx(1.0, 0.0);
}

rvec apply_channel(const rvec& samples, const ChannelProfile& p, double sample_rate,
                   std::uint64_t seed) {
    const std::size_t n = samples.size();
    rvec out(n);
    const double amp = std::pow(10.0, p.rop_dbm / 10.0);

    if (p.kind == ProfileKind::flat) {
        for (std::size_t i = 0; i < n; ++i) out[i] = amp * samples[i];
    } else {
        // zero-phase filtering over the whole padded record; real input keeps
        // a real output because gains at k and np-k are conjugate.
        const std::size_t np = next_pow2(n);
        cvec spec(np, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < n; ++i) spec[i] = cplx(amp * samples[i], 0.0);
        fft(spec);
        for (std::size_t k = 0; k <= np / 2; ++k) {
            const double f = static_cast<double>(k) * sample_rate /
                             static_cast<double>(np);
            const cplx g = profile_gain(f, p);
            spec[k] *= g;
            if (k != 0 && k != np / 2) spec[np - k] *= std::conj(g);
        }
        ifft(spec);
        for (std::size_t i = 0; i < n; ++i) out[i] = spec[i].real();
    }

    if (p.noise_psd > 0.0) {
        Rng rng(seed);
        const double sigma = std::sqrt(p.noise_psd);
        for (std::size_t i = 0; i < n; ++i) out[i] += sigma * rng.next_gaussian();
    }
    return out;
}

std::vector<std::pair<double, double>> measure_spectrum(const rvec& samples,
                                                        double sample_rate) {
    constexpr std::size_t kSeg = 256;
    const std::size_t n = samples.size();
    if (n < kSeg)
        throw ConfigError("spectrum input needs at least " + std::to_string(kSeg) +
                          " samples, got " + std::to_string(n));
    rvec window(kSeg);
    for (std::size_t i = 0; i < kSeg; ++i)
        window[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) /
                                         static_cast<double>(kSeg));
    rvec psd(kSeg / 2 + 1, 0.0);
    std::size_t count = 0;
    for (std::size_t start = 0; start + kSeg <= n; start += kSeg / 2) {
        cvec seg(kSeg);
        for (std::size_t i = 0; i < kSeg; ++i)
            seg[i] = cplx(samples[start + i] * window[i], 0.0);
        fft(seg);
        for (std::size_t k = 0; k <= kSeg / 2; ++k) psd[k] += std::norm(seg[k]);
        ++count;
    }
    double peak = 0.0;
    for (double v : psd) peak = std::max(peak, v);
    if (peak <= 0.0) peak = 1.0;
    std::vector<std::pair<double, double>> out;
    out.reserve(psd.size());
    for (std::size_t k = 0; k < psd.size(); ++k) {
        const double f = static_cast<double>(k) * sample_rate / static_cast<double>(kSeg);
        const double db = 10.0 * std::log10(std::max(psd[k] / peak, 1e-300));
        out.emplace_back(f, db);
    }
    return out;
}

}  // namespace ftn
