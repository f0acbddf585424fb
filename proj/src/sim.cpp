#include "ftn/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "ftn/constellation.hpp"
#include "ftn/errors.hpp"
#include "ftn/precoder.hpp"
#include "ftn/rng.hpp"

namespace ftn {

namespace {

constexpr std::uint64_t kSaltBits = 0xb175;
constexpr std::uint64_t kSaltNoise = 0xc4a2;
constexpr std::uint64_t kSaltProbe = 0x9e0b;

struct FrameOutcome {
    std::vector<long long> errors;
    std::vector<long long> bits;
};

// Shared read-only state for one run; workers only read from it.
struct NomContext {
    BandPlan plan;
    FrameConfig frame;
    ChannelProfile channel;
    DetectorConfig detector;
    std::vector<NomMatrix> noms;
    std::vector<Constellation> consts;
    std::vector<int> survivors;
    cvec ts;
    rvec ts_block;  // modulated training block, reused every frame
};

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t count) {
    std::vector<std::uint8_t> bits(count);
    for (auto& b : bits) b = rng.next_bit() ? 1 : 0;
    return bits;
}

FrameOutcome run_nom_frame(const NomContext& ctx, std::uint64_t master, int frame_idx) {
    const auto& plan = ctx.plan;
    const auto& fc = ctx.frame;
    const std::size_t l = plan.per_band.size();
    Rng bits_rng(derive_seed(master, static_cast<std::uint64_t>(frame_idx), kSaltBits));

    const std::size_t block_len = static_cast<std::size_t>(fc.n_fft + fc.cp_len);
    rvec record;
    record.reserve(static_cast<std::size_t>(fc.n_ts + fc.n_payload) * block_len);
    for (int t = 0; t < fc.n_ts; ++t)
        record.insert(record.end(), ctx.ts_block.begin(), ctx.ts_block.end());

    std::vector<std::uint8_t> tx_bits;
    for (int blk = 0; blk < fc.n_payload; ++blk) {
        std::vector<cvec> coeffs(l);
        for (std::size_t b = 0; b < l; ++b) {
            const auto& band = plan.per_band[b];
            const auto bits = random_bits(
                bits_rng, static_cast<std::size_t>(band.n * ctx.consts[b].bits_per_symbol));
            tx_bits.insert(tx_bits.end(), bits.begin(), bits.end());
            coeffs[b] = precode(map_bits(bits, ctx.consts[b]), ctx.noms[b]);
        }
        const rvec block = ofdm_modulate(assemble_spectrum(coeffs, plan, fc), fc);
        record.insert(record.end(), block.begin(), block.end());
    }

    const rvec rx = apply_channel(
        record, ctx.channel, fc.sample_rate,
        derive_seed(master, static_cast<std::uint64_t>(frame_idx), kSaltNoise));

    std::vector<cvec> rx_ts(static_cast<std::size_t>(fc.n_ts));
    for (int t = 0; t < fc.n_ts; ++t) {
        rvec block(rx.begin() + static_cast<std::ptrdiff_t>(t * block_len),
                   rx.begin() + static_cast<std::ptrdiff_t>((t + 1) * block_len));
        rx_ts[static_cast<std::size_t>(t)] = ofdm_demodulate(block, plan.b_total, fc);
    }
    const RxEstimate est = estimate_channel(rx_ts, ctx.ts, plan);

    // Search tables depend on the per-band noise estimate, so they are per
    // frame; the cost is small next to detection itself.
    std::vector<DetectorTables> tables;
    tables.reserve(l);
    for (std::size_t b = 0; b < l; ++b)
        tables.push_back(make_detector_tables(ctx.noms[b], est.sigma2_band[b],
                                              ctx.detector.reverse_order));

    std::vector<std::uint8_t> rx_bits;
    rx_bits.reserve(tx_bits.size());
    for (int blk = 0; blk < fc.n_payload; ++blk) {
        const std::size_t off = static_cast<std::size_t>(fc.n_ts + blk) * block_len;
        rvec block(rx.begin() + static_cast<std::ptrdiff_t>(off),
                   rx.begin() + static_cast<std::ptrdiff_t>(off + block_len));
        const cvec eq = zf_equalize(ofdm_demodulate(block, plan.b_total, fc), est);
        std::size_t pos = 0;
        for (std::size_t b = 0; b < l; ++b) {
            const auto& band = plan.per_band[b];
            const cvec y(eq.begin() + static_cast<std::ptrdiff_t>(pos),
                         eq.begin() + static_cast<std::ptrdiff_t>(pos + band.m));
            pos += static_cast<std::size_t>(band.m);
            const cvec z = inverse_precode(y, ctx.noms[b]);
            const DetectResult det =
                viterbi_detect(z, ctx.noms[b], tables[b], est.sigma2_band[b],
                               ctx.consts[b], ctx.survivors[b],
                               ctx.detector.exhaustive_flag);
            rx_bits.insert(rx_bits.end(), det.bits.begin(), det.bits.end());
        }
    }

    const BerReport rep = count_errors(tx_bits, rx_bits, plan);
    FrameOutcome out;
    for (const auto& band : rep.per_band) {
        out.errors.push_back(band.bit_errors);
        out.bits.push_back(band.bits);
    }
    return out;
}

struct ChowContext {
    int v_total = 0;
    int target_bits = 0;
    double gap_db = 3.0;
    FrameConfig frame;
    ChannelProfile channel;
    cvec ts;
    rvec ts_block;
    std::vector<Constellation> consts_by_bits;  // index 1..4; [0] unused
};

FrameOutcome run_chow_frame(const ChowContext& ctx, std::uint64_t master, int frame_idx) {
    const auto& fc = ctx.frame;
    const int v = ctx.v_total;
    const std::size_t block_len = static_cast<std::size_t>(fc.n_fft + fc.cp_len);

    // Probe pass: sound the channel with training blocks only, pick the
    // per-bin allocation from the measured post-equalization SNR.
    rvec probe;
    probe.reserve(static_cast<std::size_t>(fc.n_ts) * block_len);
    for (int t = 0; t < fc.n_ts; ++t)
        probe.insert(probe.end(), ctx.ts_block.begin(), ctx.ts_block.end());
    const rvec probe_rx = apply_channel(
        probe, ctx.channel, fc.sample_rate,
        derive_seed(master, static_cast<std::uint64_t>(frame_idx), kSaltProbe));
    const BandPlan one_band = make_band_plan(v, 1, 1.0, {4});
    std::vector<cvec> probe_ts(static_cast<std::size_t>(fc.n_ts));
    for (int t = 0; t < fc.n_ts; ++t) {
        rvec block(probe_rx.begin() + static_cast<std::ptrdiff_t>(t * block_len),
                   probe_rx.begin() + static_cast<std::ptrdiff_t>((t + 1) * block_len));
        probe_ts[static_cast<std::size_t>(t)] = ofdm_demodulate(block, v, fc);
    }
    const RxEstimate probe_est = estimate_channel(probe_ts, ctx.ts, one_band);
    rvec snr_db(static_cast<std::size_t>(v));
    for (int i = 0; i < v; ++i) {
        const double s2 = std::max(probe_est.sigma2[static_cast<std::size_t>(i)], 1e-30);
        snr_db[static_cast<std::size_t>(i)] = -10.0 * std::log10(s2);
    }
    const std::vector<int> load = chow_bitload(snr_db, ctx.target_bits, ctx.gap_db);

    Rng bits_rng(derive_seed(master, static_cast<std::uint64_t>(frame_idx), kSaltBits));
    rvec record;
    record.reserve(static_cast<std::size_t>(fc.n_ts + fc.n_payload) * block_len);
    for (int t = 0; t < fc.n_ts; ++t)
        record.insert(record.end(), ctx.ts_block.begin(), ctx.ts_block.end());

    std::vector<std::uint8_t> tx_bits;
    for (int blk = 0; blk < fc.n_payload; ++blk) {
        cvec bins(static_cast<std::size_t>(v), cplx(0.0, 0.0));
        for (int i = 0; i < v; ++i) {
            const int b = load[static_cast<std::size_t>(i)];
            if (b == 0) continue;
            const auto& c = ctx.consts_by_bits[static_cast<std::size_t>(b)];
            const auto bits = random_bits(bits_rng, static_cast<std::size_t>(b));
            tx_bits.insert(tx_bits.end(), bits.begin(), bits.end());
            bins[static_cast<std::size_t>(i)] = map_bits(bits, c)[0];
        }
        const rvec block = ofdm_modulate(hermitian_spectrum(bins, fc.n_fft), fc);
        record.insert(record.end(), block.begin(), block.end());
    }

    const rvec rx = apply_channel(
        record, ctx.channel, fc.sample_rate,
        derive_seed(master, static_cast<std::uint64_t>(frame_idx), kSaltNoise));

    std::vector<cvec> rx_ts(static_cast<std::size_t>(fc.n_ts));
    for (int t = 0; t < fc.n_ts; ++t) {
        rvec block(rx.begin() + static_cast<std::ptrdiff_t>(t * block_len),
                   rx.begin() + static_cast<std::ptrdiff_t>((t + 1) * block_len));
        rx_ts[static_cast<std::size_t>(t)] = ofdm_demodulate(block, v, fc);
    }
    const RxEstimate est = estimate_channel(rx_ts, ctx.ts, one_band);

    std::vector<std::uint8_t> rx_bits;
    rx_bits.reserve(tx_bits.size());
    for (int blk = 0; blk < fc.n_payload; ++blk) {
        const std::size_t off = static_cast<std::size_t>(fc.n_ts + blk) * block_len;
        rvec block(rx.begin() + static_cast<std::ptrdiff_t>(off),
                   rx.begin() + static_cast<std::ptrdiff_t>(off + block_len));
        const cvec eq = zf_equalize(ofdm_demodulate(block, v, fc), est);
        for (int i = 0; i < v; ++i) {
            const int b = load[static_cast<std::size_t>(i)];
            if (b == 0) continue;
            const auto& c = ctx.consts_by_bits[static_cast<std::size_t>(b)];
            append_label_bits(demap_hard(eq[static_cast<std::size_t>(i)], c),
                              c.bits_per_symbol, rx_bits);
        }
    }

    FrameOutcome out;
    out.errors.assign(1, 0);
    out.bits.assign(1, static_cast<long long>(tx_bits.size()));
    for (std::size_t i = 0; i < tx_bits.size(); ++i)
        if (tx_bits[i] != rx_bits[i]) ++out.errors[0];
    return out;
}

template <typename Fn>
std::vector<FrameOutcome> run_frames(int n_frames, int threads, Fn&& frame_fn) {
    std::vector<FrameOutcome> outcomes(static_cast<std::size_t>(n_frames));
    std::vector<std::string> failures(static_cast<std::size_t>(n_frames));
    int workers = threads > 0 ? threads
                              : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, n_frames);

    std::atomic<int> next{0};
    auto body = [&] {
        for (int f = next.fetch_add(1); f < n_frames; f = next.fetch_add(1)) {
            try {
                outcomes[static_cast<std::size_t>(f)] = frame_fn(f);
            } catch (const std::exception& e) {
                failures[static_cast<std::size_t>(f)] = e.what();
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    for (int f = 0; f < n_frames; ++f)
        if (!failures[static_cast<std::size_t>(f)].empty())
            throw std::runtime_error("frame " + std::to_string(f) + ": " +
                                     failures[static_cast<std::size_t>(f)]);
    return outcomes;
}

BerReport reduce_outcomes(const std::vector<FrameOutcome>& outcomes) {
    std::vector<long long> errors, bits;
    for (const auto& o : outcomes) {
        if (errors.size() < o.errors.size()) {
            errors.resize(o.errors.size(), 0);
            bits.resize(o.bits.size(), 0);
        }
        for (std::size_t l = 0; l < o.errors.size(); ++l) {
            errors[l] += o.errors[l];
            bits[l] += o.bits[l];
        }
    }
    return make_ber_report(errors, bits);
}

}  // namespace

BandPlan plan_for(const RunConfig& cfg) {
    const std::vector<int> orders =
        cfg.qam_orders.empty() ? allocation_profile(cfg.l_bands, cfg.profile_variant)
                               : cfg.qam_orders;
    return make_band_plan(cfg.v_total, cfg.l_bands, cfg.alpha, orders);
}

RunResult run(const RunConfig& cfg) {
    if (cfg.n_frames < 1) throw ConfigError("frame count must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    RunResult res;
    res.seed = cfg.master_seed;
    res.frames = cfg.n_frames;

    if (cfg.mode == RunMode::nom) {
        NomContext ctx;
        ctx.plan = plan_for(cfg);
        ctx.frame = cfg.frame;
        ctx.channel = cfg.channel;
        ctx.detector = cfg.detector;
        validate_frame(ctx.plan, ctx.frame);
        if (ctx.frame.n_ts < 2)
            throw ConfigError("channel estimation needs >= 2 training blocks");
        if (!ctx.detector.survivors_per_band.empty() &&
            ctx.detector.survivors_per_band.size() != ctx.plan.per_band.size())
            throw ConfigError("survivor list has " +
                              std::to_string(ctx.detector.survivors_per_band.size()) +
                              " entries for " + std::to_string(ctx.plan.per_band.size()) +
                              " bands");
        for (std::size_t b = 0; b < ctx.plan.per_band.size(); ++b) {
            const auto& band = ctx.plan.per_band[b];
            ctx.noms.push_back(make_nom(band.n, band.m));
            ctx.consts.push_back(build_constellation(band.q));
            ctx.survivors.push_back(ctx.detector.survivors_per_band.empty()
                                        ? band.q
                                        : ctx.detector.survivors_per_band[b]);
        }
        ctx.ts = training_bins(ctx.plan.b_total);
        ctx.ts_block = ofdm_modulate(hermitian_spectrum(ctx.ts, ctx.frame.n_fft), ctx.frame);

        const auto outcomes = run_frames(cfg.n_frames, cfg.threads, [&](int f) {
            return run_nom_frame(ctx, cfg.master_seed, f);
        });
        res.ber = reduce_outcomes(outcomes);
        res.plan = ctx.plan;
        res.cx = complexity_reduction(
            ctx.plan, ctx.detector,
            make_band_plan(cfg.v_total, 1, cfg.alpha, allocation_profile(1)));
        res.line_rate_bps = line_rate(ctx.plan, ctx.frame);
        res.bandwidth_hz = occupied_bandwidth(ctx.plan, ctx.frame);
    } else {
        ChowContext ctx;
        ctx.v_total = cfg.v_total;
        ctx.target_bits = cfg.chow_target_bits >= 0 ? cfg.chow_target_bits
                                                    : 3 * cfg.v_total;
        ctx.gap_db = cfg.chow_gap_db;
        if (ctx.target_bits > 4 * cfg.v_total)
            throw AllocationError("target " + std::to_string(ctx.target_bits) +
                                  " bits exceeds the cap of " +
                                  std::to_string(4 * cfg.v_total));
        ctx.frame = cfg.frame;
        ctx.channel = cfg.channel;
        const BandPlan one_band = make_band_plan(cfg.v_total, 1, 1.0, {4});
        validate_frame(one_band, ctx.frame);
        if (ctx.frame.n_ts < 2)
            throw ConfigError("channel estimation needs >= 2 training blocks");
        ctx.ts = training_bins(cfg.v_total);
        ctx.ts_block = ofdm_modulate(hermitian_spectrum(ctx.ts, ctx.frame.n_fft), ctx.frame);
        ctx.consts_by_bits.resize(5);
        for (int b = 1; b <= 4; ++b)
            ctx.consts_by_bits[static_cast<std::size_t>(b)] = build_constellation(1 << b);

        const auto outcomes = run_frames(cfg.n_frames, cfg.threads, [&](int f) {
            return run_chow_frame(ctx, cfg.master_seed, f);
        });
        res.ber = reduce_outcomes(outcomes);
        res.plan = one_band;
        const double frac = static_cast<double>(ctx.frame.n_payload) /
                            static_cast<double>(ctx.frame.n_payload + ctx.frame.n_ts);
        res.line_rate_bps = ctx.frame.sample_rate *
                            static_cast<double>(ctx.target_bits) /
                            static_cast<double>(ctx.frame.n_fft + ctx.frame.cp_len) * frac;
        res.bandwidth_hz = occupied_bandwidth(one_band, ctx.frame);
    }

    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<RunResult> sweep(const RunConfig& cfg) {
    if (cfg.sweep.param.empty()) return {run(cfg)};
    if (cfg.sweep.values.empty())
        throw ConfigError("sweep over '" + cfg.sweep.param + "' has no values");
    std::vector<RunResult> results;
    for (double v : cfg.sweep.values) {
        RunConfig point = cfg;
        point.sweep = SweepSpec{};
        if (cfg.sweep.param == "alpha") {
            point.alpha = v;
        } else if (cfg.sweep.param == "rop_dbm") {
            point.channel.rop_dbm = v;
        } else if (cfg.sweep.param == "noise_psd") {
            point.channel.noise_psd = v;
        } else if (cfg.sweep.param == "l_bands") {
            point.l_bands = static_cast<int>(std::lround(v));
            point.qam_orders.clear();
            point.detector.survivors_per_band.clear();
        } else {
            throw ConfigError("unknown sweep parameter '" + cfg.sweep.param + "'");
        }
        results.push_back(run(point));
    }
    return results;
}

std::string results_csv(const RunConfig& cfg, const std::vector<RunResult>& results) {
    std::size_t max_bands = 1;
    for (const auto& r : results) max_bands = std::max(max_bands, r.ber.per_band.size());

    const std::string param = cfg.sweep.param.empty() ? "-" : cfg.sweep.param;
    std::string csv = "param,value,l_bands,alpha_eff,line_rate_gbps,bandwidth_ghz,"
                      "ber_overall,flatness";
    for (std::size_t b = 1; b <= max_bands; ++b)
        csv += ",ber_band_" + std::to_string(b);
    csv += ",cm_approx,reduction_cm_pct\n";

    char buf[64];
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const double value = cfg.sweep.param.empty()
                                 ? 0.0
                                 : cfg.sweep.values[i];
        csv += param;
        std::snprintf(buf, sizeof buf, ",%.6g", value);
        csv += buf;
        std::snprintf(buf, sizeof buf, ",%d", r.plan.l_bands);
        csv += buf;
        std::snprintf(buf, sizeof buf, ",%.6f", r.plan.alpha_effective());
        csv += buf;
        std::snprintf(buf, sizeof buf, ",%.4f", r.line_rate_bps / 1e9);
        csv += buf;
        std::snprintf(buf, sizeof buf, ",%.4f", r.bandwidth_hz / 1e9);
        csv += buf;
        std::snprintf(buf, sizeof buf, ",%.5e", r.ber.overall.ber);
        csv += buf;
        std::snprintf(buf, sizeof buf, ",%.4f", r.ber.flatness);
        csv += buf;
        for (std::size_t b = 0; b < max_bands; ++b) {
            if (b < r.ber.per_band.size()) {
                std::snprintf(buf, sizeof buf, ",%.5e", r.ber.per_band[b].ber);
                csv += buf;
            } else {
                csv += ",";
            }
        }
        std::snprintf(buf, sizeof buf, ",%.6e", r.cx.approx.cm());
        csv += buf;
        std::snprintf(buf, sizeof buf, ",%.2f", 100.0 * r.cx.reduction_cm);
        csv += buf;
        csv += "\n";
    }
    return csv;
}

}  // namespace ftn
