#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ftn/types.hpp"

namespace ftn {

enum class ProfileKind { flat, gaussian_lowpass, tabulated };

// Low-pass emulator parameters. rop_dbm is an amplitude knob referenced to
// 0 dBm: electrical amplitude gain 10^(rop_dbm/10), so +1 dB optical power
// yields +2 dB electrical SNR against the fixed receiver noise.
struct ChannelProfile {
    ProfileKind kind = ProfileKind::flat;
    double f_3db = 10e9;                              // gaussian_lowpass only
    std::vector<std::pair<double, double>> table;     // (hertz, gain dB), increasing
    double noise_psd = 0.0;                           // variance per sample
    double rop_dbm = 0.0;
};

ChannelProfile flat_profile(double noise_psd = 0.0, double rop_dbm = 0.0);
ChannelProfile gaussian_profile(double f_3db, double noise_psd = 0.0,
                                double rop_dbm = 0.0);

// Tabulated approximation of a measured 20-km intensity-modulated link:
// gradual decline to 10 GHz, steep rolloff beyond.
ChannelProfile measured_20km_profile(double noise_psd = 0.0, double rop_dbm = 0.0);

// Two columns (frequency_hz, gain_db) per line, '#' comments. Throws
// ParseError with the line number on malformed input, ConfigError if
// frequencies are not strictly increasing.
ChannelProfile load_channel_table(const std::string& path, double noise_psd = 0.0,
                                  double rop_dbm = 0.0);

// Amplitude gain at frequency f >= 0 (zero phase). gaussian_lowpass:
// exp(-(ln2/2)*(f/f_3db)^2), power -3 dB at f_3db. tabulated: linear
// interpolation in dB, clamped to the endpoints outside the table range.
cplx profile_gain(double f, const ChannelProfile& p);

// Amplitude scale by the rop_dbm gain, zero-phase frequency-domain filtering
// over the next-power-of-two padded record, then AWGN of variance noise_psd
// per sample. sample_rate maps record bins onto the profile's frequency
// axis. Deterministic given seed.
rvec apply_channel(const rvec& samples, const ChannelProfile& p, double sample_rate,
                   std::uint64_t seed);

// Welch-averaged periodogram: 256-sample segments, 50% overlap, Hann window,
// normalized so the peak is 0 dB. Throws ConfigError for inputs shorter than
// one segment.
std::vector<std::pair<double, double>> measure_spectrum(const rvec& samples,
                                                        double sample_rate);

}  // namespace ftn
