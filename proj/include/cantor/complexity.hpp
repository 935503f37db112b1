#pragma once
// Determinism diagnostics for symbol sequences: distinct k-blocks under
// exclusion sets, the excluded-density complexity profile p_eps(k) via greedy
// rarest-class removal, block entropies, and the empirical mean of log q_n.
//
// Eliminating a block class requires excluding every window where it occurs,
// so the finite-prefix relaxation of p_eps is a max-cardinality knapsack over
// classes; removing classes by ascending window count is optimal.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "index_set.hpp"
#include "rational.hpp"
#include "sequence.hpp"

namespace cantor {

namespace detail {

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept {
        std::uint64_t h = 1469598103934665603ull; // FNV-1a 64
        for (Base b : w)
            for (int s = 0; s < 64; s += 8) {
                h ^= (b >> s) & 0xff;
                h *= 1099511628211ull;
            }
        return static_cast<std::size_t>(h);
    }
};

inline std::unordered_map<Word, std::uint64_t, WordHash> window_counts(BasicSequence& seq,
                                                                       std::size_t k, std::size_t N,
                                                                       const IndexSet& exclusion) {
    if (k == 0) fail(errc::bad_params, "block length must be >= 1");
    std::unordered_map<Word, std::uint64_t, WordHash> counts;
    if (N == 0) return counts;
    const auto& pref = seq.prefix(N + k - 1);
    Word w(k);
    for (std::size_t p = 1; p <= N; ++p) {
        if (!exclusion.empty() && exclusion.contains(p)) continue;
        for (std::size_t i = 0; i < k; ++i) w[i] = pref[p - 1 + i];
        ++counts[w];
    }
    return counts;
}

} // namespace detail

inline std::uint64_t distinct_blocks(BasicSequence& seq, std::size_t k, std::size_t N,
                                     const IndexSet& exclusion = {}) {
    return detail::window_counts(seq, k, N, exclusion).size();
}

// Minimal distinct-block count achievable by excluding window positions with
// total budget floor(eps * N): greedy removal of the rarest classes.
inline std::uint64_t p_eps(BasicSequence& seq, std::size_t k, const Rational& eps, std::size_t N) {
    if (eps < 0 || eps > 1) fail(errc::bad_params, "eps must lie in [0,1]");
    auto counts = detail::window_counts(seq, k, N, {});
    std::uint64_t budget = u64_from_big(floor_to_int(eps * Rational(static_cast<unsigned long>(N))));
    std::vector<std::uint64_t> sizes;
    sizes.reserve(counts.size());
    for (const auto& [w, c] : counts) {
        (void)w;
        sizes.push_back(c);
    }
    std::sort(sizes.begin(), sizes.end());
    std::uint64_t surviving = sizes.size();
    for (std::uint64_t c : sizes) {
        if (c > budget) break;
        budget -= c;
        --surviving;
    }
    return surviving;
}

// ---------------------------------------------------------------------------
// Block entropy from window frequencies, natural-log units.

struct BlockEntropy {
    std::size_t k = 1;
    std::uint64_t distinct = 0;
    double value = 0;      // H_k
    double per_symbol = 0; // H_k / k
    bool sparse = false;   // fewer than ~alphabet^k windows observed
};

inline BlockEntropy block_entropy(BasicSequence& seq, std::size_t k, std::size_t N) {
    auto counts = detail::window_counts(seq, k, N, {});
    BlockEntropy e;
    e.k = k;
    e.distinct = counts.size();
    double total = 0;
    for (const auto& [w, c] : counts) {
        (void)w;
        total += static_cast<double>(c);
    }
    for (const auto& [w, c] : counts) {
        (void)w;
        double f = static_cast<double>(c) / total;
        e.value -= f * std::log(f);
    }
    e.per_symbol = e.value / static_cast<double>(k);
    e.sparse = counts.size() * 10 > N; // most blocks seen once: estimates unreliable
    return e;
}

// ---------------------------------------------------------------------------
// Determinism check.
//
// (i) for each eps: the profile k -> p_eps(k), the min over k of
//     log(p_eps(k))/k, and whether it drops below eps;
// (ii) the letter-density entropy partial sum over observed letters (the
//     series runs over the full alphabet; unseen letters cannot contribute
//     to a prefix, so the sum is a lower bound and is flagged as partial).
//
// The verdict compares the tail growth rate of log p_eps(k) against a
// fraction of log(alphabet): block counts that keep multiplying look like
// positive entropy, bounded increments look deterministic. Evidence only.

struct ComplexityProfile {
    Rational eps;
    std::vector<std::uint64_t> p; // p_eps(k) for k in [k_min, k_max]
    double min_log_ratio = 0;     // min_k log(p_eps(k))/k
    bool drops_below_eps = false;
    double tail_slope = 0; // log(p(k_max)/p(k_max - d))/d
};

struct DeterminismReport {
    std::size_t N = 0;
    std::size_t k_min = 1, k_max = 1;
    std::vector<ComplexityProfile> profiles;
    std::map<Base, std::uint64_t> letter_counts;
    double letter_entropy_partial_sum = 0; // sum over observed letters of -d log d
    std::size_t observed_letters = 0;
    double slope_threshold = 0;
    bool consistent_with_deterministic = false;
};

inline DeterminismReport determinism_check(BasicSequence& seq, std::size_t N,
                                           const std::vector<Rational>& eps_list, std::size_t k_min,
                                           std::size_t k_max) {
    if (k_min == 0 || k_max < k_min) fail(errc::bad_params, "bad k range");
    if (N < 2 * k_max) fail(errc::bad_params, "need N >= 2*k_max");
    DeterminismReport rep;
    rep.N = N;
    rep.k_min = k_min;
    rep.k_max = k_max;

    // letter densities
    const auto& pref = seq.prefix(N);
    for (std::size_t i = 0; i < N; ++i) ++rep.letter_counts[pref[i]];
    rep.observed_letters = rep.letter_counts.size();
    for (const auto& [b, c] : rep.letter_counts) {
        (void)b;
        double d = static_cast<double>(c) / static_cast<double>(N);
        rep.letter_entropy_partial_sum -= d * std::log(d);
    }

    std::size_t d = std::max<std::size_t>(1, (k_max - k_min) / 2);
    bool deterministic = true;
    for (const Rational& eps : eps_list) {
        ComplexityProfile prof;
        prof.eps = eps;
        prof.min_log_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t k = k_min; k <= k_max; ++k) {
            std::uint64_t pk = p_eps(seq, k, eps, N);
            prof.p.push_back(pk);
            double ratio = std::log(std::max<double>(1.0, static_cast<double>(pk))) /
                           static_cast<double>(k);
            prof.min_log_ratio = std::min(prof.min_log_ratio, ratio);
        }
        prof.drops_below_eps = prof.min_log_ratio < to_double(eps);
        std::size_t span = std::min<std::size_t>(d, prof.p.size() - 1);
        if (span > 0) {
            double tail = std::max<double>(1.0, static_cast<double>(prof.p.back()));
            double earlier =
                std::max<double>(1.0, static_cast<double>(prof.p[prof.p.size() - 1 - span]));
            prof.tail_slope = (std::log(tail) - std::log(earlier)) / static_cast<double>(span);
        }
        rep.profiles.push_back(std::move(prof));
    }
    rep.slope_threshold = 0.25 * std::log(std::max<double>(2.0, static_cast<double>(rep.observed_letters)));
    for (const auto& prof : rep.profiles)
        deterministic = deterministic && prof.tail_slope < rep.slope_threshold;
    rep.consistent_with_deterministic = deterministic;
    return rep;
}

// ---------------------------------------------------------------------------
// Empirical mean of log q_n with a halving diagnostic. The letter counts are
// the exact symbolic content (mean = sum counts[b]/N * log b); the floating
// value is derived from them for the report.

struct LogIntegralEstimate {
    std::size_t N = 0;
    std::map<Base, std::uint64_t> counts; // exact representation of the sum
    double mean = 0;                      // natural log
    double mean_half = 0;
    double mean_base_g = 0; // mean / log(g) when g > 0 was passed
    bool drift_flag = false;
};

// Exponent view for g-power sequences whose bases g^e overflow machine
// integers: log q_n = e_n log g, so means reduce to exact exponent means.
struct ExponentLogIntegral {
    std::size_t N = 0;
    Rational mean_exponent;      // exact
    Rational mean_exponent_half; // exact, over the first N/2
    double mean_log = 0;         // mean_exponent * log g
    bool drift_flag = false;
};

inline ExponentLogIntegral log_integral_exponents(const std::vector<std::uint64_t>& exponents,
                                                  Base g, std::size_t N,
                                                  const Rational& drift_rel_tol = make_rational(1, 100)) {
    if (N < 2 || exponents.size() < N) fail(errc::bad_params, "need N >= 2 exponents");
    if (g < 2) fail(errc::bad_params, "g must be >= 2");
    ExponentLogIntegral est;
    est.N = N;
    std::uint64_t sum = 0, half_sum = 0;
    for (std::size_t i = 0; i < N; ++i) {
        sum += exponents[i];
        if (i < N / 2) half_sum += exponents[i];
    }
    est.mean_exponent = make_rational(big_from_u64(sum), big_from_u64(N));
    est.mean_exponent_half = make_rational(big_from_u64(half_sum), big_from_u64(N / 2));
    est.mean_log = to_double(est.mean_exponent) * std::log(static_cast<double>(g));
    est.drift_flag =
        abs_diff(est.mean_exponent, est.mean_exponent_half) > drift_rel_tol * est.mean_exponent_half;
    return est;
}

inline LogIntegralEstimate log_integral(BasicSequence& seq, std::size_t N, Base g = 0,
                                        double drift_rel_tol = 0.01) {
    if (N < 2) fail(errc::bad_params, "need N >= 2");
    LogIntegralEstimate est;
    est.N = N;
    const auto& pref = seq.prefix(N);
    std::map<Base, std::uint64_t> half_counts;
    for (std::size_t i = 0; i < N; ++i) {
        ++est.counts[pref[i]];
        if (i < N / 2) ++half_counts[pref[i]];
    }
    auto mean_of = [](const std::map<Base, std::uint64_t>& counts, std::size_t n) {
        double s = 0;
        for (const auto& [b, c] : counts)
            s += static_cast<double>(c) * std::log(static_cast<double>(b));
        return s / static_cast<double>(n);
    };
    est.mean = mean_of(est.counts, N);
    est.mean_half = mean_of(half_counts, N / 2);
    if (g >= 2) est.mean_base_g = est.mean / std::log(static_cast<double>(g));
    est.drift_flag = std::abs(est.mean - est.mean_half) > drift_rel_tol * std::max(est.mean_half, 1e-300);
    return est;
}

} // namespace cantor
