#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftn/channel.hpp"
#include "ftn/modem.hpp"
#include "ftn/planner.hpp"
#include "ftn/receiver.hpp"
#include "ftn/types.hpp"

namespace ftn {

enum class RunMode { nom, chow };

struct SweepSpec {
    std::string param;           // alpha | rop_dbm | noise_psd | l_bands
    std::vector<double> values;
};

struct RunConfig {
    int v_total = 120;
    int l_bands = 3;
    double alpha = 0.9;
    std::vector<int> qam_orders;  // empty -> allocation_profile(l_bands, variant)
    char profile_variant = 'A';
    FrameConfig frame;
    ChannelProfile channel;
    DetectorConfig detector;
    RunMode mode = RunMode::nom;
    std::uint64_t master_seed = 1;
    int n_frames = 10;
    int threads = 0;             // 0 = hardware concurrency
    int chow_target_bits = -1;   // -1 -> 3 * v_total
    double chow_gap_db = 3.0;
    SweepSpec sweep;             // empty param = no sweep
};

// Band plan implied by the config (allocation profile filled in when
// qam_orders is empty).
BandPlan plan_for(const RunConfig& cfg);

struct RunResult {
    BerReport ber;
    ComplexityReport cx;
    BandPlan plan;
    double line_rate_bps = 0.0;
    double bandwidth_hz = 0.0;
    std::uint64_t seed = 0;
    int frames = 0;
    double wall_seconds = 0.0;  // reported on stdout only, never serialized
};

// Monte-Carlo over cfg.n_frames frames: payload bits and channel noise come
// from per-frame substreams of master_seed, frames run on cfg.threads
// workers, and results reduce in frame order, so the outcome is independent
// of the worker count. Module errors propagate with the frame index attached.
RunResult run(const RunConfig& cfg);

// One run per sweep value (a single run when no sweep is set).
std::vector<RunResult> sweep(const RunConfig& cfg);

// CSV with one row per result: swept parameter and value, effective alpha,
// rate, bandwidth, overall and per-band BER, flatness, detector cost and
// reduction. LF endings, '.' decimals, BER in 6-significant-digit
// scientific notation.
std::string results_csv(const RunConfig& cfg, const std::vector<RunResult>& results);

}  // namespace ftn
