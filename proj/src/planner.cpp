#include "ftn/planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ftn/errors.hpp"

namespace ftn {

std::vector<int> allocation_profile(int l_bands, char variant) {
    switch (l_bands) {
        case 1: return {8};
        case 2: return {16, 4};
        case 3: return {16, 8, 4};
        case 4:
            if (variant == 'A' || variant == 'a') return {16, 16, 4, 4};
            if (variant == 'B' || variant == 'b') return {16, 16, 8, 2};
            throw ConfigError(std::string("unknown 4-band variant '") + variant +
                              "' (use A or B)");
        case 5: return {16, 16, 8, 4, 4};
        default:
            throw ConfigError("no shipped allocation profile for " +
                              std::to_string(l_bands) + " bands");
    }
}

OpCount detector_complexity(int n, int c, int q) {
    const std::int64_t N = n;
    const std::int64_t cq = static_cast<std::int64_t>(c) * q;
    OpCount out;
    out.cm_num30 = -30 - 90 * cq + (59 + 25 * cq) * N + (45 * cq - 30) * N * N +
                   20 * cq * N * N * N + N * N * N * N * N;
    out.ca_num30 = -30 - 30 * cq + (59 - 20 * cq) * N + (30 * cq - 30) * N * N +
                   20 * cq * N * N * N + N * N * N * N * N;
    return out;
}

OpCount complexity_exact(int n, int m, int c, int q) {
    const std::int64_t N = n, M = m;
    OpCount out = detector_complexity(n, c, q);
    // forward (m x n) and inverse (n x m) precoding
    out.cm_num30 += 30 * (M * N + N * M);
    out.ca_num30 += 30 * (M * (N - 1) + N * (M - 1));
    return out;
}

OpCount complexity_approx(int n, int c, int q) {
    const std::int64_t N = n;
    const std::int64_t num = 20 * static_cast<std::int64_t>(c) * q * N * N * N +
                             N * N * N * N * N;
    return OpCount{num, num};
}

namespace {

int survivors_for(const DetectorConfig& det, const BandPlan& plan, std::size_t band) {
    if (band < det.survivors_per_band.size()) return det.survivors_per_band[band];
    return plan.per_band[band].q;
}

}  // namespace

ComplexityReport complexity_reduction(const BandPlan& plan, const DetectorConfig& det,
                                      const BandPlan& baseline) {
    ComplexityReport rep;
    for (std::size_t l = 0; l < plan.per_band.size(); ++l) {
        const auto& b = plan.per_band[l];
        const int c = survivors_for(det, plan, l);
        const OpCount ex = complexity_exact(b.n, b.m, c, b.q);
        const OpCount ap = complexity_approx(b.n, c, b.q);
        rep.exact.cm_num30 += ex.cm_num30;
        rep.exact.ca_num30 += ex.ca_num30;
        rep.approx.cm_num30 += ap.cm_num30;
        rep.approx.ca_num30 += ap.ca_num30;
    }
    for (const auto& b : baseline.per_band) {
        const OpCount ex = complexity_exact(b.n, b.m, b.q, b.q);
        const OpCount ap = complexity_approx(b.n, b.q, b.q);
        rep.baseline_exact.cm_num30 += ex.cm_num30;
        rep.baseline_exact.ca_num30 += ex.ca_num30;
        rep.baseline_approx.cm_num30 += ap.cm_num30;
        rep.baseline_approx.ca_num30 += ap.ca_num30;
    }
    auto reduction = [](std::int64_t part, std::int64_t whole) {
        return whole != 0 ? 1.0 - static_cast<double>(part) / static_cast<double>(whole)
                          : 0.0;
    };
    rep.reduction_cm = reduction(rep.approx.cm_num30, rep.baseline_approx.cm_num30);
    rep.reduction_ca = reduction(rep.approx.ca_num30, rep.baseline_approx.ca_num30);
    rep.reduction_cm_exact = reduction(rep.exact.cm_num30, rep.baseline_exact.cm_num30);
    rep.reduction_ca_exact = reduction(rep.exact.ca_num30, rep.baseline_exact.ca_num30);
    return rep;
}

std::vector<int> chow_bitload(const rvec& snr_db, int target_bits, double gap_db) {
    constexpr int kCap = 4;
    const std::size_t bins = snr_db.size();
    if (bins < 1) throw ConfigError("bit loading needs at least one bin");
    if (target_bits < 0) throw ConfigError("target bit count must be >= 0");
    if (target_bits > kCap * static_cast<int>(bins))
        throw AllocationError("target " + std::to_string(target_bits) +
                              " bits exceeds the cap of " +
                              std::to_string(kCap * static_cast<int>(bins)));

    rvec snr(bins);
    for (std::size_t i = 0; i < bins; ++i)
        snr[i] = std::pow(10.0, snr_db[i] / 10.0);
    const double gap = std::pow(10.0, gap_db / 10.0);

    std::vector<int> b(bins, 0);
    rvec diff(bins, 0.0);
    double margin_db = 0.0;
    int total = 0;
    for (int iter = 0; iter < 30; ++iter) {
        const double margin = std::pow(10.0, margin_db / 10.0);
        total = 0;
        int used = 0;
        for (std::size_t i = 0; i < bins; ++i) {
            const double ideal = std::log2(1.0 + snr[i] / (gap * margin));
            int r = static_cast<int>(std::lround(ideal));
            r = std::clamp(r, 0, kCap);
            b[i] = r;
            diff[i] = ideal - r;
            total += r;
            if (r > 0) ++used;
        }
        if (total == target_bits) break;
        if (used == 0) break;  // greedy pass finishes the job
        margin_db += static_cast<double>(total - target_bits) *
                     (10.0 * std::log10(2.0)) / static_cast<double>(used);
    }

    while (total > target_bits) {
        std::size_t pick = bins;
        for (std::size_t i = 0; i < bins; ++i)
            if (b[i] > 0 && (pick == bins || diff[i] < diff[pick])) pick = i;
        b[pick] -= 1;
        diff[pick] += 1.0;
        --total;
    }
    while (total < target_bits) {
        std::size_t pick = bins;
        for (std::size_t i = 0; i < bins; ++i)
            if (b[i] < kCap && (pick == bins || diff[i] > diff[pick])) pick = i;
        b[pick] += 1;
        diff[pick] -= 1.0;
        ++total;
    }
    return b;
}

}  // namespace ftn
