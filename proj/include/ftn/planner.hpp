#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ftn/modem.hpp"
#include "ftn/receiver.hpp"
#include "ftn/types.hpp"

namespace ftn {

// Complex-operation tallies carried as integer numerators over 30 so the
// polynomial counts stay exact (both closed forms divide by 30).
struct OpCount {
    std::int64_t cm_num30 = 0;
    std::int64_t ca_num30 = 0;

    double cm() const { return static_cast<double>(cm_num30) / 30.0; }
    double ca() const { return static_cast<double>(ca_num30) / 30.0; }
};

struct ComplexityReport {
    OpCount exact;             // per-band precoding + inverse + detector terms
    OpCount approx;            // dominant-term closed form
    OpCount baseline_exact;
    OpCount baseline_approx;
    double reduction_cm = 0.0;  // 1 - approx/baseline_approx
    double reduction_ca = 0.0;
    double reduction_cm_exact = 0.0;
    double reduction_ca_exact = 0.0;
};

// QAM orders per band count for the shipped 3-bit/symbol plans:
// 1 -> [8]; 2 -> [16,4]; 3 -> [16,8,4]; 4 -> [16,16,4,4] (variant 'A') or
// [16,16,8,2] (variant 'B'); 5 -> [16,16,8,4,4]. ConfigError otherwise.
std::vector<int> allocation_profile(int l_bands, char variant = 'A');

// Tree-search cost polynomial alone for one band of n positions, survivor
// count c, alphabet size q. Exact integer arithmetic.
OpCount detector_complexity(int n, int c, int q);

// detector_complexity plus the m x n forward and n x m inverse precoding
// operation counts.
OpCount complexity_exact(int n, int m, int c, int q);

// Dominant-term form: both tallies (20*c*q*n^3 + n^5)/30.
OpCount complexity_approx(int n, int c, int q);

// Sums the per-band counts for plan and baseline (survivor count = the
// band's QAM order when det/survivors are not given) and reports reductions
// 1 - plan/baseline per metric, approx as headline plus the exact variant.
ComplexityReport complexity_reduction(const BandPlan& plan, const DetectorConfig& det,
                                      const BandPlan& baseline);

// Practical margin-adaptive loading: b_i = round(log2(1 + snr_i/(gap*margin)))
// iterated on the margin until the total lands, then greedy add/remove on the
// rounding residuals. Bits per bin capped at 4, floored at 0. Throws
// AllocationError when target_bits exceeds 4 * bins.
std::vector<int> chow_bitload(const rvec& snr_db, int target_bits, double gap_db);

}  // namespace ftn
