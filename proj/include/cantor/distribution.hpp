#pragma once
// Uniform-distribution diagnostics for orbits (q_n...q_1 x mod 1): star
// discrepancy by the sorted-points formula, empirical mass against piecewise
// constant target densities, hot-spot counts with exclusion sets, joint
// cell-by-interval frequencies, and the index-density formula for g-power
// sequences.
//
// Orbit points may be exact or interval-valued (procedural numbers). A point
// whose interval straddles a boundary is never silently resolved: it lands in
// an explicit "uncertain" tally.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expansion.hpp"
#include "index_set.hpp"
#include "normality.hpp"
#include "rational.hpp"
#include "sequence.hpp"

namespace cantor {

// ---------------------------------------------------------------------------
// Orbit samples

struct OrbitSample {
    std::vector<Rational> points; // lower endpoints when interval-valued
    Rational max_width;           // 0 for exact samples
    std::string provenance;

    std::size_t size() const { return points.size(); }
};

// Exact orbit of a rational x: points orbit_point(x, n) for n in [from, from+count).
inline OrbitSample orbit_sample_exact(const Rational& x, BasicSequence& seq, std::size_t from,
                                      std::size_t count) {
    OrbitSample s;
    s.max_width = 0;
    s.points.reserve(count);
    OrbitWalker walker(x, seq.clone());
    while (walker.index() < from) walker.step();
    for (std::size_t i = 0; i < count; ++i) {
        s.points.push_back(walker.current());
        walker.step();
    }
    return s;
}

// Interval-valued orbit of a procedural number: the tail value after n digits
// bracketed to width <= eps. Points are interval lower endpoints.
inline OrbitSample orbit_sample_intervals(DigitSource& digits, BasicSequence& seq, std::size_t from,
                                          std::size_t count, const Rational& eps) {
    OrbitSample s;
    s.max_width = 0;
    s.points.reserve(count);
    for (std::size_t n = from; n < from + count; ++n) {
        UnitInterval iv = orbit_interval_from_digits(digits, seq, n, eps);
        if (iv.width > s.max_width) s.max_width = iv.width;
        s.points.push_back(std::move(iv.lo));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Star discrepancy: D*_N = max_i max(i/N - u_(i), u_(i) - (i-1)/N) over the
// sorted sample. Exact rational output; interval slack is the sample's
// max_width, reported by the caller alongside.

inline Rational star_discrepancy(const OrbitSample& sample) {
    if (sample.points.empty()) fail(errc::empty_sample, "star discrepancy of an empty sample");
    std::vector<Rational> pts = sample.points;
    std::sort(pts.begin(), pts.end());
    const unsigned long N = static_cast<unsigned long>(pts.size());
    Rational best = 0;
    for (unsigned long i = 1; i <= N; ++i) {
        const Rational& u = pts[i - 1];
        if (!in_unit_interval(u)) fail(errc::out_of_range, "sample point outside [0,1)");
        Rational a = make_rational(i, N) - u;
        Rational b = u - make_rational(i - 1, N);
        if (a > best) best = a;
        if (b > best) best = b;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Empirical mass vs a piecewise-constant density on a rational partition.

struct DensityCell {
    Rational lo, hi;  // half-open
    Rational density; // constant on the cell
};

struct DensityComparison {
    struct Row {
        Rational lo, hi;
        std::uint64_t count = 0;
        std::uint64_t uncertain = 0;
        Rational empirical_mass;
        Rational target_mass;
        Rational error; // |empirical - target|
    };
    std::vector<Row> rows;
    Rational sup_error;
    Rational width_slack; // max interval width of the sample
};

inline DensityComparison empirical_vs_density(const OrbitSample& sample,
                                              const std::vector<DensityCell>& cells) {
    if (sample.points.empty()) fail(errc::empty_sample, "empty sample");
    // cells must partition [0,1) and the density must integrate to 1
    std::vector<DensityCell> sorted = cells;
    std::sort(sorted.begin(), sorted.end(),
              [](const DensityCell& a, const DensityCell& b) { return a.lo < b.lo; });
    Rational cursor = 0, mass = 0;
    for (const auto& c : sorted) {
        if (c.lo != cursor || c.hi <= c.lo) fail(errc::bad_density, "cells do not partition [0,1)");
        if (c.density < 0) fail(errc::bad_density, "negative density");
        mass += c.density * (c.hi - c.lo);
        cursor = c.hi;
    }
    if (cursor != 1 || mass != 1) fail(errc::bad_density, "density does not integrate to 1");

    DensityComparison cmp;
    cmp.width_slack = sample.max_width;
    for (const auto& c : sorted) cmp.rows.push_back({c.lo, c.hi, 0, 0, Rational(0), c.density * (c.hi - c.lo), Rational(0)});
    const Rational& w = sample.max_width;
    for (const Rational& p : sample.points) {
        // point value lies in [p, p + w]
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            bool lo_in = p >= sorted[i].lo && p < sorted[i].hi;
            if (!lo_in) continue;
            if (w == 0 || p + w < sorted[i].hi)
                ++cmp.rows[i].count;
            else
                ++cmp.rows[i].uncertain; // straddles the cell boundary
            break;
        }
    }
    const unsigned long N = static_cast<unsigned long>(sample.points.size());
    cmp.sup_error = 0;
    for (auto& row : cmp.rows) {
        row.empirical_mass = make_rational(big_from_u64(row.count), big_from_u64(N));
        row.error = abs_diff(row.empirical_mass, row.target_mass);
        if (row.error > cmp.sup_error) cmp.sup_error = row.error;
    }
    return cmp;
}

// ---------------------------------------------------------------------------
// Hot-spot counts nu_(a,b)(y, N, Q; N_sigma) over orbit indices [0, N-1].

struct HotSpotQuery {
    Rational a, b;      // open interval (a,b)
    IndexSet exclusion; // indices n in [0, N-1] to skip (stored 1-based as n+1)
    Rational sigma = make_rational(1, 2);
    Rational C = 1;
    std::size_t N = 0;
};

struct HotSpotResult {
    std::uint64_t nu = 0;
    std::uint64_t uncertain = 0; // interval-valued points straddling a or b
    Rational ratio;              // nu / N
    Rational linear_bound;       // C (b-a)
    bool within_linear = false;  // nu/N <= C(b-a), uncertain counted in
    double power_bound = 0;      // C (b-a)^sigma, report-only floating value
    bool within_power = false;
    Rational realized_exclusion_density;      // over the N queried indices
    bool exclusion_within_budget = true;      // realized density <= 1 - sigma
};

// point_at(n) must return the orbit value bracket for index n in [0, N-1].
inline HotSpotResult hotspot_nu(const std::function<UnitInterval(std::size_t)>& point_at,
                                const HotSpotQuery& query) {
    if (query.N == 0) fail(errc::empty_sample, "hot-spot query over zero indices");
    if (!(query.a >= 0 && query.a < query.b && query.b <= 1))
        fail(errc::bad_params, "need 0 <= a < b <= 1");
    HotSpotResult res;
    for (std::size_t n = 0; n < query.N; ++n) {
        if (query.exclusion.contains(n + 1)) continue;
        UnitInterval iv = point_at(n);
        Rational lo = iv.lo, hi = iv.hi();
        bool inside = lo > query.a && hi <= query.b; // wholly inside the open interval
        bool outside = hi <= query.a || lo >= query.b;
        if (iv.width == 0) {
            inside = lo > query.a && lo < query.b;
            outside = !inside;
        }
        if (inside)
            ++res.nu;
        else if (!outside)
            ++res.uncertain; // counted pessimistically into neither tally
    }
    const unsigned long N = static_cast<unsigned long>(query.N);
    res.ratio = make_rational(big_from_u64(res.nu), big_from_u64(N));
    res.linear_bound = query.C * (query.b - query.a);
    Rational pessimistic = make_rational(big_from_u64(res.nu + res.uncertain), big_from_u64(N));
    res.within_linear = pessimistic <= res.linear_bound;
    res.power_bound = to_double(query.C) * std::pow(to_double(query.b - query.a), to_double(query.sigma));
    res.within_power = to_double(pessimistic) <= res.power_bound;
    res.realized_exclusion_density = query.exclusion.density(query.N);
    res.exclusion_within_budget = res.realized_exclusion_density <= 1 - query.sigma;
    return res;
}

inline HotSpotResult hotspot_nu(const OrbitSample& sample, const HotSpotQuery& query) {
    if (sample.points.size() < query.N) fail(errc::bad_params, "sample shorter than the query");
    return hotspot_nu(
        [&](std::size_t n) {
            return UnitInterval{sample.points[n], sample.max_width};
        },
        query);
}

// ---------------------------------------------------------------------------
// Joint cell-by-interval frequencies: how often the base window at position
// p equals B while the orbit value before position p lies in a given
// interval. With the interval equal to I_{D,B} this recovers the uniform
// block count; against the product target d(B) * |interval| it witnesses (or
// refutes) product structure.

struct JointCellRow {
    Word B;
    Rational lo, hi;
    std::uint64_t count = 0;
    std::uint64_t uncertain = 0;
    Rational empirical;  // count / N
    Rational base_freq;  // d_N(B)
    Rational target;     // d_N(B) * (hi - lo)
    Rational deviation;  // |empirical - target|
};

struct JointCellReport {
    std::vector<JointCellRow> rows;
    Rational sup_deviation;
    std::uint64_t total_uncertain = 0;
};

inline JointCellReport joint_cell_interval_stats(
    BasicSequence& seq, const std::function<UnitInterval(std::size_t)>& orbit_before,
    std::size_t ell, const std::vector<std::pair<Rational, Rational>>& intervals, std::size_t N) {
    if (N == 0) fail(errc::empty_sample, "empty joint query");
    CylinderStats cyl = cylinder_stats(seq, ell, N);
    const auto& q = seq.prefix(N + ell - 1);

    std::map<Word, std::vector<std::uint64_t>> counts;     // B -> per-interval count
    std::map<Word, std::vector<std::uint64_t>> uncertains; // B -> per-interval straddles
    for (const auto& [B, c] : cyl.counts) {
        (void)c;
        counts[B].assign(intervals.size(), 0);
        uncertains[B].assign(intervals.size(), 0);
    }

    Word w(ell);
    for (std::size_t p = 1; p <= N; ++p) {
        for (std::size_t i = 0; i < ell; ++i) w[i] = q[p - 1 + i];
        UnitInterval iv = orbit_before(p - 1); // orbit value with p-1 factors applied
        auto& row = counts[w];
        auto& unc = uncertains[w];
        for (std::size_t k = 0; k < intervals.size(); ++k) {
            const auto& [lo, hi] = intervals[k];
            Rational plo = iv.lo, phi = iv.hi();
            bool inside = plo >= lo && (iv.width == 0 ? plo < hi : phi <= hi);
            bool outside = phi <= lo || plo >= hi;
            if (iv.width == 0) outside = !inside;
            if (inside)
                ++row[k];
            else if (!outside)
                ++unc[k];
        }
    }

    JointCellReport rep;
    rep.sup_deviation = 0;
    const unsigned long NN = static_cast<unsigned long>(N);
    for (const auto& [B, per] : counts) {
        Rational bf = make_rational(big_from_u64(cyl.counts.at(B)), big_from_u64(NN));
        for (std::size_t k = 0; k < intervals.size(); ++k) {
            JointCellRow row;
            row.B = B;
            row.lo = intervals[k].first;
            row.hi = intervals[k].second;
            row.count = per[k];
            row.uncertain = uncertains.at(B)[k];
            row.empirical = make_rational(big_from_u64(per[k]), big_from_u64(NN));
            row.base_freq = bf;
            row.target = bf * (row.hi - row.lo);
            row.deviation = abs_diff(row.empirical, row.target);
            if (row.deviation > rep.sup_deviation) rep.sup_deviation = row.deviation;
            rep.total_uncertain += row.uncertain;
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// g-power sequences: exponent views and the index-density check
//   d(A_k) = mean(min(k+1, e_n)) / mean(e_n)   (exact rationals at finite N),
// where A is the set of partial sums of the exponents e_n = log_g q_n.

inline std::vector<std::uint64_t> exponents_of(BasicSequence& seq, Base g, std::size_t N) {
    if (g < 2) fail(errc::bad_params, "g must be >= 2");
    std::vector<std::uint64_t> out;
    out.reserve(N);
    const auto& pref = seq.prefix(N);
    for (std::size_t i = 0; i < N; ++i) {
        Base q = pref[i];
        std::uint64_t e = 0;
        while (q % g == 0) {
            q /= g;
            ++e;
        }
        if (q != 1 || e == 0)
            fail(errc::not_g_power, "q_" + std::to_string(i + 1) + " is not a positive power of g");
        out.push_back(e);
    }
    return out;
}

struct GPowerDensityResult {
    std::uint64_t k = 0;
    Rational empirical_density; // |A_k cap [1, s_N]| / s_N, counted on the integer line
    Rational formula_value;     // (1/I) * mean(min(k+1, e_n))
    Rational difference;
};

// declared_I, when given, is the limit value of the mean exponent (the
// integral in the density formula); otherwise the empirical mean is used, in
// which case the two numbers agree identically at finite N (the segment
// [s_i, s_{i+1}] contributes exactly min(k+1, e_{i+1}) covered integers).
inline GPowerDensityResult gpower_index_density(const std::vector<std::uint64_t>& exponents,
                                                std::uint64_t k,
                                                const std::optional<Rational>& declared_I = {}) {
    if (exponents.empty()) fail(errc::empty_sample, "no exponents");
    const std::size_t N = exponents.size();
    // A = partial sums s_n (s_0 = 0; window is [1, s_N]); A_k = A u (A+1) u ... u (A+k).
    // t in (s_i, s_{i+1}] lies in A_k iff t <= s_i + k or t = s_{i+1}.
    std::uint64_t covered = 0, sum = 0;
    std::uint64_t clipped = 0; // sum of min(k+1, e_n)
    for (std::size_t i = 0; i < N; ++i) {
        std::uint64_t e = exponents[i];
        if (e == 0) fail(errc::not_g_power, "zero exponent");
        sum += e;
        clipped += std::min<std::uint64_t>(k + 1, e);
        covered += std::min<std::uint64_t>(k, e - 1) + 1;
    }
    GPowerDensityResult res;
    res.k = k;
    res.empirical_density = make_rational(big_from_u64(covered), big_from_u64(sum));
    Rational mean_clipped = make_rational(big_from_u64(clipped), big_from_u64(N));
    Rational I = declared_I ? *declared_I
                            : make_rational(big_from_u64(sum), big_from_u64(N));
    if (I <= 0) fail(errc::bad_params, "mean exponent must be positive");
    res.formula_value = mean_clipped / I;
    res.difference = abs_diff(res.empirical_density, res.formula_value);
    return res;
}

// ---------------------------------------------------------------------------
// Weyl-sum diagnostics |N^-1 sum e(h u_n)| for h = 1..h_max (report-only
// floating point; a secondary uniformity check).

inline std::vector<double> weyl_sums(const OrbitSample& sample, unsigned h_max) {
    if (sample.points.empty()) fail(errc::empty_sample, "empty sample");
    std::vector<double> out;
    const double tau = 6.283185307179586476925286766559;
    for (unsigned h = 1; h <= h_max; ++h) {
        double re = 0, im = 0;
        for (const Rational& p : sample.points) {
            double t = tau * h * to_double(p);
            re += std::cos(t);
            im += std::sin(t);
        }
        double N = static_cast<double>(sample.points.size());
        out.push_back(std::sqrt(re * re + im * im) / N);
    }
    return out;
}

} // namespace cantor
