#include "ftn/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "ftn/errors.hpp"

namespace ftn {

RxEstimate estimate_channel(const std::vector<cvec>& rx_ts, const cvec& known_ts,
                            const BandPlan& plan) {
    const std::size_t t = rx_ts.size();
    if (t < 2) throw ConfigError("channel estimation needs >= 2 training blocks");
    const std::size_t b = known_ts.size();
    if (static_cast<int>(b) != plan.b_total)
        throw FramingError("training pattern length " + std::to_string(b) +
                           ", plan occupies " + std::to_string(plan.b_total));
    for (const auto& blk : rx_ts)
        if (blk.size() != b)
            throw FramingError("training block length " + std::to_string(blk.size()) +
                               ", expected " + std::to_string(b));

    RxEstimate est;
    est.h.resize(b);
    est.sigma2.resize(b);
    for (std::size_t i = 0; i < b; ++i) {
        cplx acc(0.0, 0.0);
        for (const auto& blk : rx_ts) acc += blk[i] / known_ts[i];
        const cplx h = acc / static_cast<double>(t);
        if (std::abs(h) < 1e-12)
            throw DegenerateChannelError("channel gain vanishes on bin " +
                                         std::to_string(i + 1));
        double var = 0.0;
        for (const auto& blk : rx_ts) var += std::norm(blk[i] / h - known_ts[i]);
        est.h[i] = h;
        est.sigma2[i] = var / static_cast<double>(t - 1);
    }
    est.sigma2_band = band_noise_variance(est.sigma2, plan);
    return est;
}

cvec zf_equalize(const cvec& y, const RxEstimate& est) {
    if (y.size() != est.h.size())
        throw FramingError("equalizer input length " + std::to_string(y.size()) +
                           ", estimate has " + std::to_string(est.h.size()));
    cvec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::abs(est.h[i]) < 1e-12)
            throw DegenerateChannelError("channel gain vanishes on bin " +
                                         std::to_string(i + 1));
        out[i] = y[i] / est.h[i];
    }
    return out;
}

rvec band_noise_variance(const rvec& sigma2, const BandPlan& plan) {
    if (static_cast<int>(sigma2.size()) != plan.b_total)
        throw FramingError("variance vector length " + std::to_string(sigma2.size()) +
                           ", plan occupies " + std::to_string(plan.b_total));
    rvec out;
    out.reserve(plan.per_band.size());
    std::size_t pos = 0;
    for (const auto& band : plan.per_band) {
        double sum = 0.0;
        for (int i = 0; i < band.m; ++i) sum += sigma2[pos++];
        out.push_back(sum / static_cast<double>(band.n));
    }
    return out;
}

namespace {

// Floor for the diagonal loading of the tail covariance so the whitener
// stays invertible once the tail span collapses and sigma2 is zero.
constexpr double kTailRidge = 1e-6;

// Compare extensions (parent path + one candidate) by score, then by the
// symbol-index sequence in processing order. Total order, so survivor sets
// and the returned path are deterministic.
struct ExtOrder {
    const double* scores;
    const std::int8_t* seqs;  // parent prefixes, stride n
    std::size_t stride;
    std::size_t prefix_len;
    int q;

    bool operator()(std::size_t a, std::size_t b) const {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        const std::size_t pa = a / static_cast<std::size_t>(q);
        const std::size_t pb = b / static_cast<std::size_t>(q);
        const std::int8_t* sa = seqs + pa * stride;
        const std::int8_t* sb = seqs + pb * stride;
        for (std::size_t i = 0; i < prefix_len; ++i)
            if (sa[i] != sb[i]) return sa[i] < sb[i];
        return (a % static_cast<std::size_t>(q)) < (b % static_cast<std::size_t>(q));
    }
};

// In-place lower Cholesky of a Hermitian positive definite matrix (flat
// row-major m x m); the strict upper triangle is left untouched.
void chol_lower(cplx* a, int m) {
    for (int j = 0; j < m; ++j) {
        double d = a[j * m + j].real();
        for (int t = 0; t < j; ++t) d -= std::norm(a[j * m + t]);
        d = std::sqrt(std::max(d, 1e-300));
        a[j * m + j] = d;
        for (int i = j + 1; i < m; ++i) {
            cplx s = a[i * m + j];
            for (int t = 0; t < j; ++t) s -= a[i * m + t] * std::conj(a[j * m + t]);
            a[i * m + j] = s / d;
        }
    }
}

// Solves L t = r with L lower triangular (flat row-major m x m).
void forward_solve(const cplx* l, const cplx* r, cplx* t, int m) {
    for (int i = 0; i < m; ++i) {
        cplx s = r[i];
        for (int k = 0; k < i; ++k) s -= l[i * m + k] * t[k];
        t[i] = s / l[i * m + i];
    }
}

// Exact full-path metric (||y - A s||^2 - ||y||^2) / scale from gram and z.
double full_metric(const cvec& z, const NomMatrix& nom, const std::int8_t* seq,
                   const std::vector<int>& perm, const Constellation& c,
                   double scale) {
    const int n = nom.n;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const int row = perm[static_cast<std::size_t>(k)];
        const cplx sk = c.points[static_cast<std::size_t>(seq[k])];
        cplx ip(0.0, 0.0);
        for (int i = 0; i < k; ++i)
            ip += nom.gram[static_cast<std::size_t>(row)]
                          [static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] *
                  c.points[static_cast<std::size_t>(seq[i])];
        const cplx w = z[static_cast<std::size_t>(row)] - ip;
        acc += -2.0 * (std::conj(sk) * w).real() +
               std::norm(sk) *
                   nom.gram[static_cast<std::size_t>(row)][static_cast<std::size_t>(row)]
                       .real();
    }
    return acc / scale;
}

}  // namespace

DetectorTables make_detector_tables(const NomMatrix& nom, double sigma2,
                                    bool reverse_order) {
    const int n = nom.n;
    const int m = nom.m;
    DetectorTables t;
    t.n = n;
    t.m = m;
    t.reverse_order = reverse_order;
    t.perm.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        t.perm[static_cast<std::size_t>(k)] = reverse_order ? n - 1 - k : k;

    const std::size_t ms = static_cast<std::size_t>(m);
    t.cols.resize(static_cast<std::size_t>(n) * ms);
    for (int k = 0; k < n; ++k) {
        const int pos = t.perm[static_cast<std::size_t>(k)];
        for (int r = 0; r < m; ++r)
            t.cols[static_cast<std::size_t>(k) * ms + static_cast<std::size_t>(r)] =
                nom.entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(pos)];
    }

    // Tail-plus-noise covariance built back to front:
    // S_k = sum_{t>k} a_t a_t^H + (sigma2 + ridge) * I.
    const double ridge = std::max(sigma2, 0.0) +
                         kTailRidge * static_cast<double>(m) / static_cast<double>(n);
    std::vector<cplx> s(ms * ms, cplx(0.0, 0.0));
    for (int r = 0; r < m; ++r) s[static_cast<std::size_t>(r) * ms + static_cast<std::size_t>(r)] = ridge;

    t.chol.resize(static_cast<std::size_t>(n) * ms * ms);
    t.gcol.resize(static_cast<std::size_t>(n) * ms);
    t.gnorm.resize(static_cast<std::size_t>(n));
    std::vector<cplx> work(ms * ms);
    std::vector<cplx> g(ms);
    for (int k = n - 1; k >= 0; --k) {
        std::copy(s.begin(), s.end(), work.begin());
        chol_lower(work.data(), m);
        cplx* dst = t.chol.data() + static_cast<std::size_t>(k) * ms * ms;
        std::copy(work.begin(), work.end(), dst);

        const cplx* a = t.cols.data() + static_cast<std::size_t>(k) * ms;
        forward_solve(dst, a, g.data(), m);
        double gn = 0.0;
        for (int r = 0; r < m; ++r) gn += std::norm(g[static_cast<std::size_t>(r)]);
        std::copy(g.begin(), g.end(), t.gcol.begin() + static_cast<std::size_t>(k) * ms);
        t.gnorm[static_cast<std::size_t>(k)] = gn;

        // Absorb this stage's column for the next (earlier) stage's tail.
        for (int r = 0; r < m; ++r)
            for (int c2 = 0; c2 < m; ++c2)
                s[static_cast<std::size_t>(r) * ms + static_cast<std::size_t>(c2)] +=
                    a[r] * std::conj(a[c2]);
    }
    return t;
}

DetectResult viterbi_detect(const cvec& z, const NomMatrix& nom,
                            const DetectorTables& tables, double sigma_hat,
                            const Constellation& c, int survivors, bool exhaustive) {
    const int n = nom.n;
    if (static_cast<int>(z.size()) != n)
        throw FramingError("detector input length " + std::to_string(z.size()) +
                           ", transform size " + std::to_string(n));
    const int q = c.order;
    if (q < 1 || c.points.empty()) throw ConfigError("empty constellation");
    if (!exhaustive && survivors < 1) throw ConfigError("survivor count must be >= 1");
    if (exhaustive && n * c.bits_per_symbol > 20)
        throw ConfigError("exhaustive search over " + std::to_string(n) +
                          " positions of order " + std::to_string(q) +
                          " is infeasible");
    if (tables.n != n || tables.m != nom.m)
        throw FramingError("detector tables built for a different transform");

    const double scale = sigma_hat > 0.0 ? sigma_hat : 1.0;
    const std::vector<int>& perm = tables.perm;
    const std::size_t stride = static_cast<std::size_t>(n);
    const std::size_t ms = static_cast<std::size_t>(nom.m);

    std::vector<double> pnorm(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j)
        pnorm[static_cast<std::size_t>(j)] = std::norm(c.points[static_cast<std::size_t>(j)]);

    std::vector<std::int8_t> seqs(stride, 0);
    std::size_t count = 1;

    if (exhaustive) {
        // Every path is kept, so no ranking is needed; accumulate the exact
        // incremental metric and pick the minimizer at the end.
        std::vector<double> metrics = {0.0};
        std::vector<double> c1(static_cast<std::size_t>(q)), c2(static_cast<std::size_t>(q)),
            c3(static_cast<std::size_t>(q));
        for (int j = 0; j < q; ++j) {
            c1[static_cast<std::size_t>(j)] =
                -2.0 * c.points[static_cast<std::size_t>(j)].real() / scale;
            c2[static_cast<std::size_t>(j)] =
                -2.0 * c.points[static_cast<std::size_t>(j)].imag() / scale;
        }
        std::vector<double> next_metrics;
        std::vector<std::int8_t> next_seqs;
        std::vector<cplx> prod;  // prod[i*q + j] = G[row][perm[i]] * point[j]
        for (int k = 0; k < n; ++k) {
            const int row = perm[static_cast<std::size_t>(k)];
            const cplx zk = z[static_cast<std::size_t>(row)];
            const double gkk =
                nom.gram[static_cast<std::size_t>(row)][static_cast<std::size_t>(row)].real();
            for (int j = 0; j < q; ++j)
                c3[static_cast<std::size_t>(j)] = pnorm[static_cast<std::size_t>(j)] * gkk / scale;
            prod.resize(static_cast<std::size_t>(k) * static_cast<std::size_t>(q));
            for (int i = 0; i < k; ++i) {
                const cplx g = nom.gram[static_cast<std::size_t>(row)]
                                       [static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
                for (int j = 0; j < q; ++j)
                    prod[static_cast<std::size_t>(i * q + j)] =
                        g * c.points[static_cast<std::size_t>(j)];
            }
            const std::size_t n_ext = count * static_cast<std::size_t>(q);
            next_metrics.resize(n_ext);
            next_seqs.resize(n_ext * stride);
            for (std::size_t p = 0; p < count; ++p) {
                const std::int8_t* seq = seqs.data() + p * stride;
                cplx ip(0.0, 0.0);
                for (int i = 0; i < k; ++i)
                    ip += prod[static_cast<std::size_t>(i * q) + static_cast<std::size_t>(seq[i])];
                const double wre = zk.real() - ip.real();
                const double wim = zk.imag() - ip.imag();
                for (int j = 0; j < q; ++j) {
                    const std::size_t e = p * static_cast<std::size_t>(q) + static_cast<std::size_t>(j);
                    next_metrics[e] = metrics[p] + c1[static_cast<std::size_t>(j)] * wre +
                                      c2[static_cast<std::size_t>(j)] * wim +
                                      c3[static_cast<std::size_t>(j)];
                    std::int8_t* dst = next_seqs.data() + e * stride;
                    std::memcpy(dst, seq, static_cast<std::size_t>(k));
                    dst[k] = static_cast<std::int8_t>(j);
                }
            }
            seqs.swap(next_seqs);
            metrics.swap(next_metrics);
            count = n_ext;
        }
        std::size_t best = 0;
        for (std::size_t p = 1; p < count; ++p) {
            if (metrics[p] < metrics[best]) {
                best = p;
            } else if (metrics[p] == metrics[best]) {
                const std::int8_t* sa = seqs.data() + p * stride;
                const std::int8_t* sb = seqs.data() + best * stride;
                for (int i = 0; i < n; ++i) {
                    if (sa[i] != sb[i]) {
                        if (sa[i] < sb[i]) best = p;
                        break;
                    }
                }
            }
        }
        DetectResult res;
        res.indices.resize(static_cast<std::size_t>(n));
        const std::int8_t* win = seqs.data() + best * stride;
        for (int k = 0; k < n; ++k)
            res.indices[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = win[k];
        res.symbols.reserve(static_cast<std::size_t>(n));
        res.bits.reserve(static_cast<std::size_t>(n * c.bits_per_symbol));
        for (int i = 0; i < n; ++i) {
            const int idx = res.indices[static_cast<std::size_t>(i)];
            res.symbols.push_back(c.points[static_cast<std::size_t>(idx)]);
            append_label_bits(c.labels[static_cast<std::size_t>(idx)], c.bits_per_symbol,
                              res.bits);
        }
        return res;
    }

    // Survivor mode. Observation recovered from z: the transform's rows are
    // orthonormal, so A A^H = I and y = A z. Each path carries its running
    // residual r = y - sum of decided columns; extensions are scored by
    // ||L_k^{-1} (r - point * a_k)||^2 expanded around the parent solve.
    cvec y(ms, cplx(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        const cplx zk = z[static_cast<std::size_t>(tables.perm[static_cast<std::size_t>(k)])];
        const cplx* a = tables.cols.data() + static_cast<std::size_t>(k) * ms;
        for (std::size_t r = 0; r < ms; ++r) y[r] += a[r] * zk;
    }

    cvec resid(y);  // stride ms per path
    std::vector<double> ext_scores;
    std::vector<std::int8_t> next_seqs;
    cvec next_resid;
    cvec t(ms);
    std::vector<std::size_t> order;

    for (int k = 0; k < n; ++k) {
        const cplx* lk = tables.chol.data() + static_cast<std::size_t>(k) * ms * ms;
        const cplx* gk = tables.gcol.data() + static_cast<std::size_t>(k) * ms;
        const double gg = tables.gnorm[static_cast<std::size_t>(k)];
        const cplx* ak = tables.cols.data() + static_cast<std::size_t>(k) * ms;

        const std::size_t n_ext = count * static_cast<std::size_t>(q);
        ext_scores.resize(n_ext);
        for (std::size_t p = 0; p < count; ++p) {
            forward_solve(lk, resid.data() + p * ms, t.data(), nom.m);
            double tn = 0.0;
            cplx beta(0.0, 0.0);
            for (std::size_t r = 0; r < ms; ++r) {
                tn += std::norm(t[r]);
                beta += std::conj(gk[r]) * t[r];
            }
            double* out = ext_scores.data() + p * static_cast<std::size_t>(q);
            for (int j = 0; j < q; ++j) {
                const cplx pt = c.points[static_cast<std::size_t>(j)];
                out[j] = tn - 2.0 * (std::conj(pt) * beta).real() +
                         pnorm[static_cast<std::size_t>(j)] * gg;
            }
        }

        std::size_t keep = n_ext;
        order.resize(n_ext);
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (static_cast<std::size_t>(survivors) < n_ext) {
            keep = static_cast<std::size_t>(survivors);
            const ExtOrder cmp{ext_scores.data(), seqs.data(), stride,
                               static_cast<std::size_t>(k), q};
            std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                             order.end(), cmp);
            std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), cmp);
        }

        next_seqs.resize(keep * stride);
        next_resid.resize(keep * ms);
        for (std::size_t r = 0; r < keep; ++r) {
            const std::size_t e = order[r];
            const std::size_t parent = e / static_cast<std::size_t>(q);
            const std::int8_t sym = static_cast<std::int8_t>(e % static_cast<std::size_t>(q));
            std::int8_t* dst = next_seqs.data() + r * stride;
            std::memcpy(dst, seqs.data() + parent * stride, static_cast<std::size_t>(k));
            dst[k] = sym;
            const cplx pt = c.points[static_cast<std::size_t>(sym)];
            const cplx* rp = resid.data() + parent * ms;
            cplx* rc = next_resid.data() + r * ms;
            for (std::size_t i = 0; i < ms; ++i) rc[i] = rp[i] - pt * ak[i];
        }
        seqs.swap(next_seqs);
        resid.swap(next_resid);
        count = keep;
    }

    // Final winner by the exact metric, ties to the smallest sequence.
    std::size_t best = 0;
    double best_metric = full_metric(z, nom, seqs.data(), perm, c, scale);
    for (std::size_t p = 1; p < count; ++p) {
        const double metric = full_metric(z, nom, seqs.data() + p * stride, perm, c, scale);
        if (metric < best_metric) {
            best = p;
            best_metric = metric;
        } else if (metric == best_metric) {
            const std::int8_t* sa = seqs.data() + p * stride;
            const std::int8_t* sb = seqs.data() + best * stride;
            for (int i = 0; i < n; ++i) {
                if (sa[i] != sb[i]) {
                    if (sa[i] < sb[i]) best = p;
                    break;
                }
            }
        }
    }

    DetectResult res;
    res.indices.resize(static_cast<std::size_t>(n));
    const std::int8_t* win = seqs.data() + best * stride;
    for (int k = 0; k < n; ++k)
        res.indices[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = win[k];
    res.symbols.reserve(static_cast<std::size_t>(n));
    res.bits.reserve(static_cast<std::size_t>(n * c.bits_per_symbol));
    for (int i = 0; i < n; ++i) {
        const int idx = res.indices[static_cast<std::size_t>(i)];
        res.symbols.push_back(c.points[static_cast<std::size_t>(idx)]);
        append_label_bits(c.labels[static_cast<std::size_t>(idx)], c.bits_per_symbol,
                          res.bits);
    }
    return res;
}

DetectResult viterbi_detect(const cvec& z, const NomMatrix& nom, double sigma_hat,
                            const Constellation& c, int survivors,
                            bool exhaustive, bool reverse_order) {
    if (exhaustive) {
        DetectorTables t;
        t.n = nom.n;
        t.m = nom.m;
        t.reverse_order = reverse_order;
        t.perm.resize(static_cast<std::size_t>(nom.n));
        for (int k = 0; k < nom.n; ++k)
            t.perm[static_cast<std::size_t>(k)] = reverse_order ? nom.n - 1 - k : k;
        return viterbi_detect(z, nom, t, sigma_hat, c, survivors, true);
    }
    return viterbi_detect(z, nom, make_detector_tables(nom, sigma_hat, reverse_order),
                          sigma_hat, c, survivors, false);
}

BerReport make_ber_report(const std::vector<long long>& errors,
                          const std::vector<long long>& bits) {
    BerReport rep;
    rep.per_band.resize(errors.size());
    for (std::size_t l = 0; l < errors.size(); ++l) {
        auto& band = rep.per_band[l];
        band.bit_errors = errors[l];
        band.bits = bits[l];
        band.ber = bits[l] > 0 ? static_cast<double>(errors[l]) /
                                     static_cast<double>(bits[l])
                               : 0.0;
        rep.overall.bit_errors += errors[l];
        rep.overall.bits += bits[l];
    }
    rep.overall.ber = rep.overall.bits > 0
                          ? static_cast<double>(rep.overall.bit_errors) /
                                static_cast<double>(rep.overall.bits)
                          : 0.0;
    double max_ber = 0.0, mean_ber = 0.0;
    for (const auto& band : rep.per_band) {
        max_ber = std::max(max_ber, band.ber);
        mean_ber += band.ber;
    }
    mean_ber /= rep.per_band.empty() ? 1.0 : static_cast<double>(rep.per_band.size());
    rep.flatness = mean_ber > 0.0 ? max_ber / mean_ber : 1.0;
    return rep;
}

BerReport count_errors(const std::vector<std::uint8_t>& tx_bits,
                       const std::vector<std::uint8_t>& rx_bits,
                       const BandPlan& plan) {
    if (tx_bits.size() != rx_bits.size())
        throw FramingError("bit stream lengths differ: " + std::to_string(tx_bits.size()) +
                           " vs " + std::to_string(rx_bits.size()));
    std::vector<std::size_t> band_bits;
    std::size_t block_bits = 0;
    for (const auto& band : plan.per_band) {
        int lg = 0;
        for (int v = band.q; v > 1; v >>= 1) ++lg;
        band_bits.push_back(static_cast<std::size_t>(band.n) * static_cast<std::size_t>(lg));
        block_bits += band_bits.back();
    }
    if (block_bits == 0 || tx_bits.size() % block_bits != 0)
        throw FramingError("stream length " + std::to_string(tx_bits.size()) +
                           " not a multiple of the per-block bit count " +
                           std::to_string(block_bits));

    std::vector<long long> errors(plan.per_band.size(), 0);
    std::vector<long long> bits(plan.per_band.size(), 0);
    std::size_t pos = 0;
    while (pos < tx_bits.size()) {
        for (std::size_t l = 0; l < band_bits.size(); ++l) {
            for (std::size_t i = 0; i < band_bits[l]; ++i, ++pos)
                if (tx_bits[pos] != rx_bits[pos]) ++errors[l];
            bits[l] += static_cast<long long>(band_bits[l]);
        }
    }
    return make_ber_report(errors, bits);
}

}  // namespace ftn
