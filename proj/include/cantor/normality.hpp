#pragma once
// Block-counting statistics and their exact expectations.
//
// Window convention: the window at position p (1-based) covers digits
// x_p..x_{p+l-1} and bases q_p..q_{p+l-1}; counts and expectations run over
// p in [1, n]. This makes every conservation identity exact:
//   sum_D count(D) = n,   sum_D expectation(D) = n,
//   sum_B expectation(D,B) = expectation(D),  sum_B count(D,B) = count(D).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "expansion.hpp"
#include "index_set.hpp"
#include "rational.hpp"
#include "sequence.hpp"

namespace cantor {

inline bool admissible(const DigitWord& D, const Word& B) {
    if (D.size() != B.size()) return false;
    for (std::size_t i = 0; i < D.size(); ++i)
        if (D[i] >= B[i]) return false;
    return true;
}

inline BigInt word_product(const Word& B) {
    BigInt p = 1;
    for (Base b : B) p *= big_from_u64(b);
    return p;
}

// ---------------------------------------------------------------------------
// BlockStats: one streaming pass over a range of window start positions,
// holding base-window counts, digit-window counts, and joint counts.
// Mergeable across adjacent ranges (the pass reads l-1 symbols past its end).

struct BlockStats {
    std::size_t ell = 1;
    std::size_t first_pos = 1; // inclusive
    std::size_t end_pos = 1;   // exclusive
    std::map<Word, std::uint64_t> base_counts;
    std::map<DigitWord, std::uint64_t> digit_counts;
    std::map<std::pair<DigitWord, Word>, std::uint64_t> joint_counts;

    std::uint64_t windows() const { return end_pos - first_pos; }

    void merge(const BlockStats& other) {
        if (other.ell != ell) fail(errc::bad_params, "merging block stats of different lengths");
        if (other.first_pos != end_pos) fail(errc::bad_params, "merging non-adjacent block stats");
        end_pos = other.end_pos;
        for (const auto& [k, c] : other.base_counts) base_counts[k] += c;
        for (const auto& [k, c] : other.digit_counts) digit_counts[k] += c;
        for (const auto& [k, c] : other.joint_counts) joint_counts[k] += c;
    }
};

inline BlockStats block_stats_range(BasicSequence& seq, DigitSource& digits, std::size_t ell,
                                    std::size_t first_pos, std::size_t end_pos) {
    if (ell == 0) fail(errc::bad_params, "block length must be >= 1");
    BlockStats st;
    st.ell = ell;
    st.first_pos = first_pos;
    st.end_pos = end_pos;
    if (end_pos <= first_pos) return st;
    const auto& q = seq.prefix(end_pos - 1 + ell - 1);
    const auto& x = digits.prefix(end_pos - 1 + ell - 1);
    Word b(ell);
    DigitWord d(ell);
    for (std::size_t p = first_pos; p < end_pos; ++p) {
        for (std::size_t i = 0; i < ell; ++i) {
            b[i] = q[p - 1 + i];
            d[i] = x[p - 1 + i];
        }
        ++st.base_counts[b];
        ++st.digit_counts[d];
        ++st.joint_counts[{d, b}];
    }
    return st;
}

inline BlockStats block_stats(BasicSequence& seq, DigitSource& digits, std::size_t ell, std::size_t n) {
    return block_stats_range(seq, digits, ell, 1, n + 1);
}

// Base-window counts only (for expectations without a digit stream).
inline std::map<Word, std::uint64_t> base_window_counts(BasicSequence& seq, std::size_t ell,
                                                        std::size_t n) {
    CylinderStats st = cylinder_stats(seq, ell, n);
    return st.counts;
}

// ---------------------------------------------------------------------------
// Expectations. expected_count(Q, D, n) is the exact rational
//   sum_{p=1..n} [D admissible at p] / (q_p ... q_{p+l-1}),
// evaluated by grouping positions with equal base windows.

inline Rational expected_count_grouped(const std::map<Word, std::uint64_t>& base_counts,
                                       const DigitWord& D) {
    Rational sum = 0;
    for (const auto& [B, c] : base_counts)
        if (admissible(D, B)) sum += make_rational(big_from_u64(c), word_product(B));
    return sum;
}

inline Rational expected_count(BasicSequence& seq, const DigitWord& D, std::size_t n) {
    if (D.empty()) fail(errc::bad_params, "digit block must have length >= 1");
    return expected_count_grouped(base_window_counts(seq, D.size(), n), D);
}

// expected_count_bases(Q, D, B, n) = |S_B cap [1,n]| / prod(B) when D < B, else 0.
inline Rational expected_count_bases(BasicSequence& seq, const DigitWord& D, const Word& B,
                                     std::size_t n) {
    if (D.size() != B.size() || D.empty())
        fail(errc::length_mismatch, "digit block and base block must have equal positive length");
    if (!admissible(D, B)) return Rational(0);
    auto counts = base_window_counts(seq, B.size(), n);
    auto it = counts.find(B);
    if (it == counts.end()) return Rational(0);
    return make_rational(big_from_u64(it->second), word_product(B));
}

// ---------------------------------------------------------------------------
// Counts. block_count(Q, x, D, n; A) = #{p in [1,n] \ A : window at p == D}.

inline std::uint64_t block_count(DigitSource& digits, const DigitWord& D, std::size_t n,
                                 const IndexSet& exclusion = {}) {
    if (D.empty()) fail(errc::bad_params, "digit block must have length >= 1");
    const std::size_t ell = D.size();
    if (n == 0) return 0;
    const auto& x = digits.prefix(n + ell - 1);
    std::uint64_t count = 0;
    for (std::size_t p = 1; p <= n; ++p) {
        if (!exclusion.empty() && exclusion.contains(p)) continue;
        bool match = true;
        for (std::size_t i = 0; i < ell && match; ++i) match = (x[p - 1 + i] == D[i]);
        count += match;
    }
    return count;
}

inline std::uint64_t block_count_bases(BasicSequence& seq, DigitSource& digits, const DigitWord& D,
                                       const Word& B, std::size_t n, const IndexSet& exclusion = {}) {
    if (D.size() != B.size() || D.empty())
        fail(errc::length_mismatch, "digit block and base block must have equal positive length");
    const std::size_t ell = D.size();
    if (n == 0) return 0;
    const auto& q = seq.prefix(n + ell - 1);
    const auto& x = digits.prefix(n + ell - 1);
    std::uint64_t count = 0;
    for (std::size_t p = 1; p <= n; ++p) {
        if (!exclusion.empty() && exclusion.contains(p)) continue;
        bool match = true;
        for (std::size_t i = 0; i < ell && match; ++i)
            match = (q[p - 1 + i] == B[i]) && (x[p - 1 + i] == D[i]);
        count += match;
    }
    return count;
}

// ---------------------------------------------------------------------------
// P_D estimate with a halving diagnostic.

struct LimitEstimate {
    Rational at_n;      // Q_n(D)/n
    Rational at_half;   // Q_{n/2}(D)/(n/2)
    Rational drift;     // |at_n - at_half|
};

inline LimitEstimate limit_frequency(BasicSequence& seq, const DigitWord& D, std::size_t n) {
    if (n < 2) fail(errc::bad_params, "need n >= 2 for the halving diagnostic");
    Rational qn = expected_count(seq, D, n);
    Rational qh = expected_count(seq, D, n / 2);
    LimitEstimate est;
    est.at_n = qn / Rational(static_cast<unsigned long>(n));
    est.at_half = qh / Rational(static_cast<unsigned long>(n / 2));
    est.drift = abs_diff(est.at_n, est.at_half);
    return est;
}

// ---------------------------------------------------------------------------
// Normality report: per-block N/Q ratios, the ratio-normality matrix over
// block pairs with enough expected mass, and uniform (per base-block) ratios.
// Verdicts at a tolerance, never proofs.

enum class RatioStatus { pass, fail, insufficient };

struct RatioEntry {
    DigitWord D;
    Word B; // empty for plain (non-uniform) entries
    std::uint64_t count = 0;
    Rational expectation;
    std::optional<Rational> ratio; // missing when expectation == 0
    RatioStatus status = RatioStatus::insufficient;
};

struct RatioPairEntry {
    DigitWord D1, D2;
    Rational ratio; // (N/Q)(D1) / (N/Q)(D2)
    bool pass = false;
};

struct LevelReport {
    std::size_t ell = 1;
    std::vector<RatioEntry> blocks;
    std::vector<RatioEntry> uniform;
    std::vector<RatioPairEntry> ratio_pairs;
};

struct NormalityReport {
    std::size_t n = 0;
    Rational tolerance;
    Rational mass_floor; // theta: minimum Q_n(D) for a verdict
    std::vector<LevelReport> levels;
    bool all_pass = true;
    bool enumeration_truncated = false; // digit alphabet capped
};

namespace detail {

// Enumerate candidate digit blocks: all D < some observed base window, with
// digits below a cap (the observed max base, itself capped to keep the
// enumeration finite for giant-base models).
inline void enumerate_blocks(const std::map<Word, std::uint64_t>& base_counts, std::size_t ell,
                             std::uint64_t digit_cap, std::vector<DigitWord>& out, bool& truncated) {
    std::uint64_t max_base = 0;
    for (const auto& [B, c] : base_counts) {
        (void)c;
        for (Base b : B) max_base = std::max<std::uint64_t>(max_base, b);
    }
    std::uint64_t limit = max_base;
    if (limit > digit_cap) {
        limit = digit_cap;
        truncated = true;
    }
    DigitWord cur(ell, 0);
    for (;;) {
        out.push_back(cur);
        std::size_t i = ell;
        while (i > 0) {
            if (++cur[i - 1] < limit) break;
            cur[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
}

} // namespace detail

inline NormalityReport normality_report(BasicSequence& seq, DigitSource& digits, std::size_t n,
                                        std::size_t ell_max, const Rational& tol,
                                        const Rational& mass_floor = Rational(10),
                                        std::uint64_t digit_enumeration_cap = 64) {
    if (ell_max == 0) fail(errc::bad_params, "need ell_max >= 1");
    NormalityReport rep;
    rep.n = n;
    rep.tolerance = tol;
    rep.mass_floor = mass_floor;
    for (std::size_t ell = 1; ell <= ell_max; ++ell) {
        LevelReport level;
        level.ell = ell;
        BlockStats st = block_stats(seq, digits, ell, n);

        std::vector<DigitWord> candidates;
        detail::enumerate_blocks(st.base_counts, ell, digit_enumeration_cap, candidates,
                                 rep.enumeration_truncated);
        // observed digit windows beyond the cap still get entries
        for (const auto& [D, c] : st.digit_counts) {
            (void)c;
            bool above = false;
            for (Digit d : D) above = above || d >= digit_enumeration_cap;
            if (above) candidates.push_back(D);
        }

        std::vector<std::pair<DigitWord, Rational>> healthy; // blocks above theta, with N/Q
        for (const DigitWord& D : candidates) {
            Rational expectation = expected_count_grouped(st.base_counts, D);
            if (expectation == 0) continue;
            auto itc = st.digit_counts.find(D);
            std::uint64_t count = itc == st.digit_counts.end() ? 0 : itc->second;
            RatioEntry e;
            e.D = D;
            e.count = count;
            e.expectation = expectation;
            Rational ratio = Rational(big_from_u64(count)) / expectation;
            e.ratio = ratio;
            if (expectation < mass_floor) {
                e.status = RatioStatus::insufficient;
            } else {
                e.status = abs_diff(ratio, Rational(1)) <= tol ? RatioStatus::pass : RatioStatus::fail;
                healthy.push_back({D, ratio});
                if (e.status == RatioStatus::fail) rep.all_pass = false;
            }
            level.blocks.push_back(std::move(e));
        }

        // ratio-normality pairs: both blocks above theta, denominator ratio nonzero
        // TODO: cap the pair matrix once above-theta block counts reach a few
        // hundred (quadratic growth at ell = 3 over wide alphabets)
        for (std::size_t i = 0; i < healthy.size(); ++i)
            for (std::size_t j = i + 1; j < healthy.size(); ++j) {
                if (healthy[j].second == 0) continue;
                RatioPairEntry p;
                p.D1 = healthy[i].first;
                p.D2 = healthy[j].first;
                p.ratio = healthy[i].second / healthy[j].second;
                p.pass = abs_diff(p.ratio, Rational(1)) <= tol;
                if (!p.pass) rep.all_pass = false;
                level.ratio_pairs.push_back(std::move(p));
            }

        // uniform ratios per (D, B)
        for (const auto& [B, bc] : st.base_counts) {
            Rational expectation_all = make_rational(big_from_u64(bc), word_product(B));
            // enumerate D < B only when small; otherwise use observed joint windows
            BigInt combos = word_product(B);
            if (combos <= 4096) {
                DigitWord D(ell, 0);
                for (;;) {
                    RatioEntry e;
                    e.D = D;
                    e.B = B;
                    e.expectation = expectation_all; // |S_B cap [1,n]| / prod(B)
                    auto itj = st.joint_counts.find({D, B});
                    e.count = itj == st.joint_counts.end() ? 0 : itj->second;
                    Rational ratio = Rational(big_from_u64(e.count)) / e.expectation;
                    e.ratio = ratio;
                    if (e.expectation < mass_floor)
                        e.status = RatioStatus::insufficient;
                    else {
                        e.status = abs_diff(ratio, Rational(1)) <= tol ? RatioStatus::pass
                                                                       : RatioStatus::fail;
                        if (e.status == RatioStatus::fail) rep.all_pass = false;
                    }
                    level.uniform.push_back(std::move(e));
                    std::size_t i = ell;
                    while (i > 0) {
                        if (++D[i - 1] < B[i - 1]) break;
                        D[i - 1] = 0;
                        --i;
                    }
                    if (i == 0) break;
                }
            } else {
                for (const auto& [key, jc] : st.joint_counts) {
                    if (key.second != B) continue;
                    RatioEntry e;
                    e.D = key.first;
                    e.B = B;
                    e.count = jc;
                    e.expectation = expectation_all;
                    e.ratio = Rational(big_from_u64(jc)) / e.expectation;
                    e.status = e.expectation < mass_floor
                                   ? RatioStatus::insufficient
                                   : (abs_diff(*e.ratio, Rational(1)) <= tol ? RatioStatus::pass
                                                                             : RatioStatus::fail);
                    if (e.status == RatioStatus::fail) rep.all_pass = false;
                    level.uniform.push_back(std::move(e));
                }
            }
        }

        rep.levels.push_back(std::move(level));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Cell geometry. For interval-coded models the base cylinder
//   E_B = {y : coding of T^0 y, ..., T^{l-1} y is B}
// is a finite union of half-open intervals, and the cell over it carries the
// digit interval I_{D,B} vertically. For fixed B the I_{D,B} tile [0,1).

struct IntervalUnion {
    std::vector<std::pair<Rational, Rational>> parts; // disjoint, sorted, half-open

    Rational measure() const {
        Rational m = 0;
        for (const auto& [a, b] : parts) m += b - a;
        return m;
    }

    bool empty() const { return parts.empty(); }

    void normalize() {
        std::sort(parts.begin(), parts.end());
        std::vector<std::pair<Rational, Rational>> merged;
        for (const auto& p : parts) {
            if (p.second <= p.first) continue;
            if (!merged.empty() && merged.back().second == p.first)
                merged.back().second = p.second;
            else
                merged.push_back(p);
        }
        parts = std::move(merged);
    }

    static IntervalUnion intersect(const IntervalUnion& u, const IntervalUnion& v) {
        IntervalUnion r;
        for (const auto& [a1, b1] : u.parts)
            for (const auto& [a2, b2] : v.parts) {
                Rational lo = std::max(a1, a2), hi = std::min(b1, b2);
                if (lo < hi) r.parts.push_back({lo, hi});
            }
        r.normalize();
        return r;
    }
};

struct IntervalCodedModel {
    enum class Dynamics { doubling, rotation };
    Dynamics dynamics = Dynamics::doubling;
    std::vector<IntervalCell> cells;
    Rational alpha; // rotation only

    static IntervalCodedModel doubling(Base low = 2, Base high = 3) {
        IntervalCodedModel m;
        m.dynamics = Dynamics::doubling;
        m.cells = {{Rational(0), make_rational(1, 2), low}, {make_rational(1, 2), Rational(1), high}};
        return m;
    }

    static IntervalCodedModel doubling_with_cells(std::vector<IntervalCell> cells) {
        IntervalCodedModel m;
        m.dynamics = Dynamics::doubling;
        m.cells = std::move(cells);
        detail::validate_cells(m.cells);
        return m;
    }

    static IntervalCodedModel rotation(const RotationSpec& spec) {
        IntervalCodedModel m;
        m.dynamics = Dynamics::rotation;
        m.cells = spec.cells;
        m.alpha = spec.alpha;
        detail::validate_cells(m.cells);
        return m;
    }

    IntervalUnion cell_union(Base b) const {
        IntervalUnion u;
        for (const auto& c : cells)
            if (c.base == b) u.parts.push_back({c.lo, c.hi});
        u.normalize();
        return u;
    }

    std::vector<Base> alphabet() const {
        std::set<Base> s;
        for (const auto& c : cells) s.insert(c.base);
        return std::vector<Base>(s.begin(), s.end());
    }

    IntervalUnion preimage(const IntervalUnion& u) const {
        IntervalUnion r;
        if (dynamics == Dynamics::doubling) {
            for (const auto& [a, b] : u.parts) {
                r.parts.push_back({a / 2, b / 2});
                Rational half = make_rational(1, 2);
                r.parts.push_back({a / 2 + half, b / 2 + half});
            }
        } else {
            for (const auto& [a, b] : u.parts) {
                Rational lo = frac(a - alpha);
                Rational hi = lo + (b - a);
                if (hi <= 1) {
                    r.parts.push_back({lo, hi});
                } else {
                    r.parts.push_back({lo, Rational(1)});
                    r.parts.push_back({Rational(0), hi - 1});
                }
            }
        }
        r.normalize();
        return r;
    }

    // First-coordinate cylinder of B: intersection over i of T^{-(i-1)} cell(b_i).
    IntervalUnion cylinder(const Word& B) const {
        if (B.empty()) fail(errc::bad_params, "cylinder of the empty block");
        IntervalUnion r = cell_union(B.back());
        for (std::size_t i = B.size() - 1; i >= 1; --i) {
            r = IntervalUnion::intersect(cell_union(B[i - 1]), preimage(r));
            if (r.empty()) break;
        }
        return r;
    }
};

struct CellRectangle {
    Word B;
    DigitWord D;
    IntervalUnion horizontal; // E_B component
    Rational y0, y1;          // I_{D,B}
};

inline std::vector<CellRectangle> cell_rectangles(const IntervalCodedModel& model, std::size_t ell) {
    if (ell == 0) fail(errc::bad_params, "need ell >= 1");
    std::vector<Base> letters = model.alphabet();
    if (letters.empty()) fail(errc::unsupported_model, "model has no cells");
    std::vector<CellRectangle> out;
    std::vector<std::size_t> pick(ell, 0);
    for (;;) {
        Word B(ell);
        for (std::size_t i = 0; i < ell; ++i) B[i] = letters[pick[i]];
        IntervalUnion horiz = model.cylinder(B);
        if (!horiz.empty()) {
            BigInt prod = word_product(B);
            Rational height = make_rational(BigInt(1), prod);
            DigitWord D(ell, 0);
            for (;;) {
                Rational y0 = 0;
                BigInt partial = 1;
                for (std::size_t i = 0; i < ell; ++i) {
                    partial *= big_from_u64(B[i]);
                    y0 += make_rational(big_from_u64(D[i]), partial);
                }
                out.push_back({B, D, horiz, y0, y0 + height});
                std::size_t i = ell;
                while (i > 0) {
                    if (++D[i - 1] < B[i - 1]) break;
                    D[i - 1] = 0;
                    --i;
                }
                if (i == 0) break;
            }
        }
        std::size_t i = ell;
        while (i > 0) {
            if (++pick[i - 1] < letters.size()) break;
            pick[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    return out;
}

} // namespace cantor
