#pragma once
// Basic sequences Q = (q_n), n >= 1, q_n >= 2, produced from declarative
// generator specs: periodic patterns, codings of rotations and a two-step
// nilsystem, substitution fixed points, digit concatenations, seeded
// Bernoulli draws, one fixed non-ergodic word, and plain files.
//
// Irrational rotation numbers are represented by exact rational convergents
// with validity horizon n < den/2; presets provide golden-ratio and sqrt(2)
// convergents with denominators above 10^17.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace cantor {

using Base = std::uint64_t;
using Word = std::vector<Base>;

// ---------------------------------------------------------------------------
// Seeded randomness: SplitMix64 with the standard constants. Draws are
// interpreted as dyadic rationals u/2^64 and matched against exact
// cumulative thresholds, so runs are bit-reproducible across platforms.

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform over [0, bound) by rejection on the top range.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) fail(errc::bad_params, "below(0)");
        std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound);
        for (;;) {
            std::uint64_t v = next();
            if (v < limit || limit == 0) return v % bound;
        }
    }
};

// Exact categorical sampler: thresholds t_k = ceil(cum_k * 2^64), draw u
// picks the first k with u < t_k. Equivalent to comparing u/2^64 against the
// exact rational cumulative weights. Zero weights are legal and never drawn.
// Thresholds are at most 2^64, so they live in 128-bit integers and the per
// draw comparison stays off the big-number heap.
class CategoricalSampler {
public:
    CategoricalSampler(const std::vector<Rational>& weights) {
        Rational cum = 0;
        BigInt two64 = BigInt(1) << 64;
        for (const Rational& w : weights) {
            if (w < 0) fail(errc::invalid_spec, "weights must be nonnegative");
            cum += w;
            BigInt t = ceil_to_int(Rational(cum) * Rational(two64));
            bool top = t >= two64;
            thresholds_.push_back(top ? ((unsigned __int128)1 << 64)
                                      : (unsigned __int128)u64_from_big(t));
        }
        if (cum != 1) fail(errc::invalid_spec, "weights must sum to 1 exactly");
    }

    std::size_t sample(std::uint64_t draw) const {
        for (std::size_t k = 0; k < thresholds_.size(); ++k)
            if (draw < thresholds_[k]) return k;
        return thresholds_.size() - 1; // unreachable: last threshold is 2^64
    }

private:
    std::vector<unsigned __int128> thresholds_;
};

// ---------------------------------------------------------------------------
// Generator specs

struct PeriodicSpec {
    std::vector<Base> pattern;
};

struct IntervalCell {
    Rational lo, hi; // half-open [lo, hi)
    Base base = 2;
};

struct RotationSpec {
    Rational alpha;                 // exact convergent standing in for an irrational
    std::vector<IntervalCell> cells; // must partition [0,1)
};

struct NilSpec {
    Rational alpha;
    Base base_ge = 2; // emitted when frac(n*alpha) >= frac(n^2*alpha)
    Base base_lt = 3;
};

struct SubstitutionSpec {
    std::map<char, std::string> rules;
    std::map<char, Base> base_of;
    char start = 'a';
    unsigned primitivity_bound = 16; // t_max for the primitivity search
};

enum class ConcatKind { champernowne, squares, primes, aks };

struct ConcatenationSpec {
    ConcatKind kind = ConcatKind::champernowne;
    unsigned radix = 10;          // digit radix g (ignored for aks)
    std::uint64_t digit_offset = 2; // added to every digit to reach bases >= 2
};

struct BernoulliSpec {
    std::vector<Base> alphabet;
    std::vector<Rational> weights;
    std::uint64_t seed = 0;
};

struct NonErgodicWordSpec {
    // abcbac(abc)^2(bac)^2(abc)^3(bac)^3...
    std::map<char, Base> base_of = {{'a', 2}, {'b', 3}, {'c', 4}};
};

struct FileSpec {
    std::string path; // newline-separated decimal integers >= 2
};

using GeneratorSpec = std::variant<PeriodicSpec, RotationSpec, NilSpec, SubstitutionSpec,
                                   ConcatenationSpec, BernoulliSpec, NonErgodicWordSpec, FileSpec>;

// ---------------------------------------------------------------------------
// Rotation-number presets, built from continued fractions so no literal
// constant needs trusting. Denominators land just below 2^62.

inline Rational convergent_from_cf(const std::vector<unsigned>& head, unsigned repeat,
                                   const BigInt& den_target) {
    // x = [0; a1, a2, ...]: p_k = a_k p_{k-1} + p_{k-2}, q_k likewise.
    BigInt p0 = 1, q0 = 0; // p_{-1}/q_{-1}
    BigInt p1 = 0, q1 = 1; // p_0/q_0 for x = [0; ...]
    std::size_t i = 0;
    for (;;) {
        unsigned a = i < head.size() ? head[i] : repeat;
        BigInt p2 = BigInt(a) * p1 + p0;
        BigInt q2 = BigInt(a) * q1 + q0;
        if (q2 > den_target) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        ++i;
    }
    return make_rational(p1, q1);
}

// frac(golden ratio) = 1/phi = [0;1,1,1,...]
inline Rational golden_alpha() {
    return convergent_from_cf({}, 1, BigInt(1) << 62);
}

// frac(sqrt 2) = sqrt(2) - 1 = [0;2,2,2,...]
inline Rational sqrt2_alpha() {
    return convergent_from_cf({}, 2, BigInt(1) << 62);
}

// Two-cell rotation coding whose factors form a Sturmian word: cells split at
// 1 - alpha, so the cut point lies on the orbit closure boundary.
inline RotationSpec sturmian_golden_spec(Base low = 2, Base high = 3) {
    Rational a = golden_alpha();
    RotationSpec spec;
    spec.alpha = a;
    spec.cells = {{Rational(0), 1 - a, low}, {1 - a, Rational(1), high}};
    return spec;
}

inline RotationSpec half_split_rotation_spec(const Rational& alpha, Base low = 2, Base high = 3) {
    RotationSpec spec;
    spec.alpha = alpha;
    spec.cells = {{Rational(0), make_rational(1, 2), low}, {make_rational(1, 2), Rational(1), high}};
    return spec;
}

// ---------------------------------------------------------------------------
// Substitution machinery

namespace detail {

inline const std::string& rule_of(const SubstitutionSpec& s, char letter) {
    auto it = s.rules.find(letter);
    if (it == s.rules.end() || it->second.empty())
        fail(errc::invalid_spec, std::string("substitution: missing or empty rule for '") + letter + "'");
    return it->second;
}

} // namespace detail

// Validates (H2), primitivity up to t_max, and (H1), in that order.
inline void check_substitution(const SubstitutionSpec& spec) {
    std::vector<char> letters;
    for (const auto& [a, w] : spec.rules) {
        if (w.empty()) fail(errc::invalid_spec, "substitution: empty image");
        letters.push_back(a);
        for (char c : w)
            if (!spec.rules.count(c))
                fail(errc::invalid_spec, std::string("substitution: image letter '") + c + "' has no rule");
    }
    if (letters.empty()) fail(errc::invalid_spec, "substitution: no rules");
    if (!spec.rules.count(spec.start))
        fail(errc::invalid_spec, "substitution: start letter has no rule");

    // (H2): psi(start) begins with start.
    if (detail::rule_of(spec, spec.start)[0] != spec.start)
        fail(errc::not_extendable, "substitution image of the start letter does not start with it");

    std::size_t m = letters.size();
    auto index = [&](char c) {
        return static_cast<std::size_t>(std::lower_bound(letters.begin(), letters.end(), c) - letters.begin());
    };

    // Primitivity: some t <= t_max with psi^t(a) containing every letter.
    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
    for (std::size_t i = 0; i < m; ++i)
        for (char c : detail::rule_of(spec, letters[i])) reach[i][index(c)] = true;
    auto all_positive = [&](const std::vector<std::vector<bool>>& r) {
        for (const auto& row : r)
            for (bool v : row)
                if (!v) return false;
        return true;
    };
    std::vector<std::vector<bool>> power = reach;
    bool primitive = all_positive(power);
    for (unsigned t = 2; !primitive && t <= spec.primitivity_bound; ++t) {
        std::vector<std::vector<bool>> nxt(m, std::vector<bool>(m, false));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (power[i][j])
                    for (std::size_t k = 0; k < m; ++k)
                        if (reach[j][k]) nxt[i][k] = true;
        power = std::move(nxt);
        primitive = all_positive(power);
    }
    if (!primitive)
        fail(errc::not_primitive, "no power up to t_max makes every image contain every letter");

    // (H1): |psi^t(a)| -> infinity for every a. Lengths are nondecreasing
    // (images are nonempty); iterate with a stagnation window.
    std::vector<BigInt> len(m, 1);
    std::vector<BigInt> window_ref;
    unsigned t_check = static_cast<unsigned>(2 * m + 8);
    unsigned window = static_cast<unsigned>(m + 1);
    for (unsigned t = 1; t <= t_check; ++t) {
        std::vector<BigInt> nxt(m, 0);
        for (std::size_t i = 0; i < m; ++i)
            for (char c : detail::rule_of(spec, letters[i])) nxt[i] += len[index(c)];
        len = std::move(nxt);
        if (t == t_check - window) window_ref = len;
    }
    for (std::size_t i = 0; i < m; ++i)
        if (len[i] <= window_ref[i])
            fail(errc::not_growing, std::string("substitution: |psi^t(") + letters[i] + ")| stays bounded");
}

inline std::string substitution_fixed_point(const SubstitutionSpec& spec, std::size_t length) {
    check_substitution(spec);
    std::string word(1, spec.start);
    while (word.size() < length) {
        std::string next;
        next.reserve(word.size() * 2);
        for (char c : word) next += detail::rule_of(spec, c);
        if (next.size() <= word.size())
            fail(errc::not_growing, "substitution: fixed point does not extend");
        word = std::move(next);
    }
    word.resize(length);
    return word;
}

// ---------------------------------------------------------------------------
// Concatenation digit streams (digits before the base offset is applied)

namespace detail {

inline void append_radix_digits(BigInt value, unsigned radix, std::vector<std::uint64_t>& out) {
    std::vector<std::uint64_t> rev;
    if (value == 0) rev.push_back(0);
    while (value > 0) {
        BigInt q, r;
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), value.get_mpz_t(), radix);
        rev.push_back(mpz_get_ui(r.get_mpz_t()));
        value = q;
    }
    out.insert(out.end(), rev.rbegin(), rev.rend());
}

// Continued fraction partial quotients of p/q in (0,1), final quotient
// adjusted so it is not 1 ([..., a, 1] -> [..., a+1]).
inline std::vector<std::uint64_t> cf_digits(std::uint64_t p, std::uint64_t q) {
    std::vector<std::uint64_t> out;
    std::uint64_t a = p, b = q; // expanding p/q: quotients of Euclid on (q, p)
    std::uint64_t num = b, den = a;
    while (den != 0) {
        out.push_back(num / den);
        std::uint64_t r = num % den;
        num = den;
        den = r;
    }
    if (out.size() > 1 && out.back() == 1) {
        out.pop_back();
        out.back() += 1;
    }
    return out;
}

} // namespace detail

// Exact digit prefix of the champernowne/squares/primes/aks streams.
inline std::vector<std::uint64_t> concatenation_digits(ConcatKind kind, unsigned radix,
                                                       std::size_t count) {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    if (kind == ConcatKind::aks) {
        // rationals ordered 1/2, 1/3, 2/3, 1/4, 2/4, 3/4, 1/5, ...
        for (std::uint64_t q = 2; out.size() < count; ++q)
            for (std::uint64_t p = 1; p < q && out.size() < count; ++p) {
                auto digits = detail::cf_digits(p, q);
                out.insert(out.end(), digits.begin(), digits.end());
            }
        out.resize(count);
        return out;
    }
    if (radix < 2) fail(errc::invalid_spec, "concatenation radix must be >= 2");
    if (kind == ConcatKind::primes) {
        // simple incremental sieve-by-trial-division; desk-scale inputs
        std::vector<std::uint64_t> primes;
        std::uint64_t n = 1;
        while (out.size() < count) {
            ++n;
            bool isp = true;
            for (std::uint64_t d : primes) {
                if (d * d > n) break;
                if (n % d == 0) { isp = false; break; }
            }
            if (!isp) continue;
            primes.push_back(n);
            detail::append_radix_digits(BigInt(big_from_u64(n)), radix, out);
        }
        out.resize(count);
        return out;
    }
    BigInt n = 0;
    while (out.size() < count) {
        n += 1;
        BigInt v = (kind == ConcatKind::squares) ? BigInt(n * n) : n;
        detail::append_radix_digits(v, radix, out);
    }
    out.resize(count);
    return out;
}

// ---------------------------------------------------------------------------
// Spec validation

inline void validate_spec(const GeneratorSpec& spec);

namespace detail {

inline void validate_cells(const std::vector<IntervalCell>& cells) {
    if (cells.empty()) fail(errc::invalid_spec, "no coding cells");
    std::vector<IntervalCell> sorted = cells;
    std::sort(sorted.begin(), sorted.end(),
              [](const IntervalCell& a, const IntervalCell& b) { return a.lo < b.lo; });
    Rational cursor = 0;
    for (const auto& c : sorted) {
        if (c.base < 2) fail(errc::invalid_spec, "cell base must be >= 2");
        if (c.lo != cursor) fail(errc::invalid_spec, "coding cells do not partition [0,1)");
        if (c.hi <= c.lo) fail(errc::invalid_spec, "empty coding cell");
        cursor = c.hi;
    }
    if (cursor != 1) fail(errc::invalid_spec, "coding cells do not cover [0,1)");
}

struct SpecValidator {
    void operator()(const PeriodicSpec& s) const {
        if (s.pattern.empty()) fail(errc::invalid_spec, "periodic pattern is empty");
        for (Base b : s.pattern)
            if (b < 2) fail(errc::invalid_spec, "periodic pattern base < 2");
    }
    void operator()(const RotationSpec& s) const {
        if (s.alpha <= 0 || s.alpha >= 1) fail(errc::invalid_spec, "rotation alpha must lie in (0,1)");
        validate_cells(s.cells);
    }
    void operator()(const NilSpec& s) const {
        if (s.alpha <= 0 || s.alpha >= 1) fail(errc::invalid_spec, "nil alpha must lie in (0,1)");
        if (s.base_ge < 2 || s.base_lt < 2) fail(errc::invalid_spec, "nil bases must be >= 2");
    }
    void operator()(const SubstitutionSpec& s) const {
        check_substitution(s);
        for (const auto& [a, w] : s.rules) {
            (void)w;
            auto it = s.base_of.find(a);
            if (it == s.base_of.end() || it->second < 2)
                fail(errc::invalid_spec, std::string("substitution: base map missing letter '") + a + "'");
        }
    }
    void operator()(const ConcatenationSpec& s) const {
        if (s.kind != ConcatKind::aks && s.radix < 2)
            fail(errc::invalid_spec, "concatenation radix must be >= 2");
        if (s.kind == ConcatKind::aks) {
            if (s.digit_offset < 1)
                fail(errc::invalid_spec, "aks digits start at 1; offset must be >= 1");
        } else if (s.digit_offset < 2) {
            fail(errc::invalid_spec, "digit offset must make every base >= 2");
        }
    }
    void operator()(const BernoulliSpec& s) const {
        if (s.alphabet.empty() || s.alphabet.size() != s.weights.size())
            fail(errc::invalid_spec, "bernoulli alphabet/weights mismatch");
        for (Base b : s.alphabet)
            if (b < 2) fail(errc::invalid_spec, "bernoulli base < 2");
        Rational sum = 0;
        for (const Rational& w : s.weights) {
            if (w <= 0) fail(errc::invalid_spec, "bernoulli weight <= 0");
            sum += w;
        }
        if (sum != 1) fail(errc::invalid_spec, "bernoulli weights must sum to 1 exactly");
    }
    void operator()(const NonErgodicWordSpec& s) const {
        for (char c : {'a', 'b', 'c'}) {
            auto it = s.base_of.find(c);
            if (it == s.base_of.end() || it->second < 2)
                fail(errc::invalid_spec, "non-ergodic word base map must cover a,b,c with bases >= 2");
        }
    }
    void operator()(const FileSpec& s) const {
        if (s.path.empty()) fail(errc::invalid_spec, "file spec without path");
    }
};

} // namespace detail

inline void validate_spec(const GeneratorSpec& spec) {
    std::visit(detail::SpecValidator{}, spec);
}

// ---------------------------------------------------------------------------
// Engines: resumable single-consumer streams, one per spec kind.

namespace detail {

class Engine {
public:
    virtual ~Engine() = default;
    // Extend out to at least `need` entries; `want` is a geometric-growth
    // hint that bounded sources may ignore.
    virtual void refill(std::vector<Base>& out, std::size_t need, std::size_t want) = 0;
};

class PeriodicEngine final : public Engine {
public:
    explicit PeriodicEngine(PeriodicSpec spec) : spec_(std::move(spec)) {}
    void refill(std::vector<Base>& out, std::size_t /*need*/, std::size_t want) override {
        while (out.size() < want) out.push_back(spec_.pattern[out.size() % spec_.pattern.size()]);
    }

private:
    PeriodicSpec spec_;
};

inline std::uint64_t horizon_of(const BigInt& den) {
    BigInt h = den / 2;
    if (mpz_sizeinbase(h.get_mpz_t(), 2) > 62) return ~std::uint64_t(0);
    return u64_from_big(h);
}

// Exact rotation state: numerator over the fixed denominator of alpha.
// Cell comparisons run in 128-bit integers when the magnitudes allow it.
class RotationEngine final : public Engine {
public:
    explicit RotationEngine(RotationSpec spec) : spec_(std::move(spec)) {
        std::sort(spec_.cells.begin(), spec_.cells.end(),
                  [](const IntervalCell& a, const IntervalCell& b) { return a.lo < b.lo; });
        den_ = spec_.alpha.get_den();
        step_ = spec_.alpha.get_num();
        horizon_ = horizon_of(den_);
        bool fits = mpz_sizeinbase(den_.get_mpz_t(), 2) <= 62;
        for (const auto& c : spec_.cells)
            fits = fits && mpz_sizeinbase(c.hi.get_den().get_mpz_t(), 2) <= 62 &&
                   mpz_sizeinbase(c.hi.get_num().get_mpz_t(), 2) <= 62;
        if (fits) {
            fast_den_ = u64_from_big(den_);
            fast_step_ = u64_from_big(step_);
            for (const auto& c : spec_.cells)
                fast_cells_.push_back({u64_from_big(BigInt(c.hi.get_num())),
                                       u64_from_big(BigInt(c.hi.get_den())), c.base});
        }
        pos_big_ = 0;
    }

    void refill(std::vector<Base>& out, std::size_t need, std::size_t want) override {
        while (out.size() < want) {
            if (out.size() + 1 >= horizon_) {
                if (out.size() >= need) return; // growth hint clipped at the horizon
                fail(errc::horizon_exceeded,
                     "rotation coding past the validity horizon n < den(alpha)/2");
            }
            if (fast_den_) {
                pos_fast_ += fast_step_;
                if (pos_fast_ >= fast_den_) pos_fast_ -= fast_den_;
                out.push_back(classify_fast(pos_fast_));
            } else {
                pos_big_ += step_;
                if (pos_big_ >= den_) pos_big_ -= den_;
                out.push_back(classify_big(pos_big_));
            }
        }
    }

private:
    struct FastCell {
        std::uint64_t hi_num, hi_den;
        Base base;
    };

    Base classify_fast(std::uint64_t r) const {
        for (const auto& c : fast_cells_) {
            // r/den < hi  <=>  r * hi.den < hi.num * den
            unsigned __int128 lhs = (unsigned __int128)r * c.hi_den;
            unsigned __int128 rhs = (unsigned __int128)c.hi_num * fast_den_;
            if (lhs < rhs) return c.base;
        }
        return fast_cells_.back().base;
    }

    Base classify_big(const BigInt& r) const {
        Rational x = make_rational(r, den_);
        for (const auto& c : spec_.cells)
            if (x < c.hi) return c.base;
        return spec_.cells.back().base;
    }

    RotationSpec spec_;
    BigInt den_, step_, pos_big_;
    std::vector<FastCell> fast_cells_;
    std::uint64_t fast_den_ = 0, fast_step_ = 0, pos_fast_ = 0;
    std::uint64_t horizon_ = 0;
};

// Orbit of (0,0) under (x,y) -> (x+a, y+2x+a); emits base_ge when x >= y.
class NilEngine final : public Engine {
public:
    explicit NilEngine(NilSpec spec) : spec_(std::move(spec)) {
        den_ = spec_.alpha.get_den();
        step_ = spec_.alpha.get_num();
        horizon_ = horizon_of(den_);
        x_ = 0;
        y_ = 0;
    }

    void refill(std::vector<Base>& out, std::size_t need, std::size_t want) override {
        while (out.size() < want) {
            if (out.size() + 1 >= horizon_) {
                if (out.size() >= need) return;
                fail(errc::horizon_exceeded, "nil coding past the validity horizon n < den(alpha)/2");
            }
            BigInt two_x = 2 * x_;
            x_ += step_;
            if (x_ >= den_) x_ -= den_;
            y_ += two_x + step_;
            y_ %= den_; // y grew by at most 3*den
            out.push_back(x_ >= y_ ? spec_.base_ge : spec_.base_lt);
        }
    }

private:
    NilSpec spec_;
    BigInt den_, step_, x_, y_;
    std::uint64_t horizon_ = 0;
};

class SubstitutionEngine final : public Engine {
public:
    explicit SubstitutionEngine(SubstitutionSpec spec) : spec_(std::move(spec)) {
        check_substitution(spec_);
        word_.assign(1, spec_.start);
    }

    void refill(std::vector<Base>& out, std::size_t /*need*/, std::size_t want) override {
        while (word_.size() < want) {
            std::string next;
            next.reserve(word_.size() * 2);
            for (char c : word_) next += rule_of(spec_, c);
            word_ = std::move(next);
        }
        while (out.size() < want) out.push_back(spec_.base_of.at(word_[out.size()]));
    }

private:
    SubstitutionSpec spec_;
    std::string word_;
};

class ConcatenationEngine final : public Engine {
public:
    explicit ConcatenationEngine(ConcatenationSpec spec) : spec_(std::move(spec)) {}

    void refill(std::vector<Base>& out, std::size_t /*need*/, std::size_t want) override {
        if (want <= out.size()) return;
        // Regenerate from scratch when extension is needed; the stream is a
        // pure prefix function, and callers extend geometrically.
        auto digits = concatenation_digits(spec_.kind, spec_.radix, want);
        out.clear();
        out.reserve(want);
        for (std::uint64_t d : digits) out.push_back(d + spec_.digit_offset);
    }

private:
    ConcatenationSpec spec_;
};

class BernoulliEngine final : public Engine {
public:
    explicit BernoulliEngine(BernoulliSpec spec)
        : spec_(std::move(spec)), sampler_(spec_.weights), rng_(spec_.seed) {}

    void refill(std::vector<Base>& out, std::size_t /*need*/, std::size_t want) override {
        while (out.size() < want) out.push_back(spec_.alphabet[sampler_.sample(rng_.next())]);
    }

private:
    BernoulliSpec spec_;
    CategoricalSampler sampler_;
    SplitMix64 rng_;
};

class NonErgodicEngine final : public Engine {
public:
    explicit NonErgodicEngine(NonErgodicWordSpec spec) : spec_(std::move(spec)) {}

    void refill(std::vector<Base>& out, std::size_t /*need*/, std::size_t want) override {
        // segment n contributes (abc)^n (bac)^n; whole segments are appended,
        // callers truncate via prefix length
        while (out.size() < want) {
            ++segment_;
            for (std::uint64_t r = 0; r < segment_; ++r) append(out, "abc");
            for (std::uint64_t r = 0; r < segment_; ++r) append(out, "bac");
        }
    }

private:
    void append(std::vector<Base>& out, const char* w) {
        for (const char* p = w; *p; ++p) out.push_back(spec_.base_of.at(*p));
    }

    NonErgodicWordSpec spec_;
    std::uint64_t segment_ = 0;
};

class FileEngine final : public Engine {
public:
    explicit FileEngine(FileSpec spec) : spec_(std::move(spec)) {
        std::ifstream in(spec_.path);
        if (!in) fail(errc::invalid_spec, "cannot open sequence file " + spec_.path);
        std::uint64_t v;
        while (in >> v) {
            if (v < 2) fail(errc::invalid_spec, "sequence file contains a base < 2");
            data_.push_back(v);
        }
    }

    void refill(std::vector<Base>& out, std::size_t need, std::size_t want) override {
        if (need > data_.size())
            fail(errc::source_exhausted, "sequence file " + spec_.path + " has only " +
                                             std::to_string(data_.size()) + " bases");
        out.assign(data_.begin(),
                   data_.begin() + static_cast<std::ptrdiff_t>(std::min(want, data_.size())));
    }

private:
    FileSpec spec_;
    std::vector<Base> data_;
};

inline std::unique_ptr<Engine> make_engine(const GeneratorSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::unique_ptr<Engine> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PeriodicSpec>) return std::make_unique<PeriodicEngine>(s);
            else if constexpr (std::is_same_v<T, RotationSpec>) return std::make_unique<RotationEngine>(s);
            else if constexpr (std::is_same_v<T, NilSpec>) return std::make_unique<NilEngine>(s);
            else if constexpr (std::is_same_v<T, SubstitutionSpec>) return std::make_unique<SubstitutionEngine>(s);
            else if constexpr (std::is_same_v<T, ConcatenationSpec>) return std::make_unique<ConcatenationEngine>(s);
            else if constexpr (std::is_same_v<T, BernoulliSpec>) return std::make_unique<BernoulliEngine>(s);
            else if constexpr (std::is_same_v<T, NonErgodicWordSpec>) return std::make_unique<NonErgodicEngine>(s);
            else return std::make_unique<FileEngine>(s);
        },
        spec);
}

} // namespace detail

// ---------------------------------------------------------------------------
// BasicSequence: buffered prefix access plus running products M_n.

class BasicSequence {
public:
    explicit BasicSequence(GeneratorSpec spec) : spec_(std::move(spec)) {
        validate_spec(spec_);
        engine_ = detail::make_engine(spec_);
    }

    BasicSequence(BasicSequence&&) noexcept = default;
    BasicSequence& operator=(BasicSequence&&) noexcept = default;

    const GeneratorSpec& spec() const { return spec_; }

    BasicSequence clone() const { return BasicSequence(spec_); }

    // q_n, 1-based
    Base q(std::size_t n) {
        ensure(n);
        return buffer_[n - 1];
    }

    // first n bases q_1..q_n
    const std::vector<Base>& prefix(std::size_t n) {
        ensure(n);
        return buffer_;
    }

    void ensure(std::size_t n) {
        if (buffer_.size() >= n) return;
        std::size_t want = std::max<std::size_t>(n, buffer_.size() + buffer_.size() / 2 + 16);
        engine_->refill(buffer_, n, want);
    }

    // M_n = q_1 q_2 ... q_n, M_0 = 1; cached incrementally.
    const BigInt& product(std::size_t n) {
        ensure(n);
        while (product_len_ < n) {
            product_ *= big_from_u64(buffer_[product_len_]);
            ++product_len_;
        }
        if (product_len_ == n) return product_;
        // asked for an earlier product than cached: recompute from scratch
        product_ = 1;
        product_len_ = 0;
        while (product_len_ < n) {
            product_ *= big_from_u64(buffer_[product_len_]);
            ++product_len_;
        }
        return product_;
    }

private:
    GeneratorSpec spec_;
    std::unique_ptr<detail::Engine> engine_;
    std::vector<Base> buffer_;
    BigInt product_ = 1;
    std::size_t product_len_ = 0;
};

// generate(spec, n): the first n bases.
inline std::vector<Base> generate(const GeneratorSpec& spec, std::size_t n) {
    BasicSequence seq(spec);
    auto& pref = seq.prefix(n);
    return std::vector<Base>(pref.begin(), pref.begin() + static_cast<std::ptrdiff_t>(n));
}

// ---------------------------------------------------------------------------
// CylinderStats: window counts of base blocks, window start positions are
// 1-based, windows are attributed to the chunk holding their start position,
// so merging adjacent chunks is plain addition (the counting pass reads k-1
// bases past its end).

struct CylinderStats {
    std::size_t k = 1;
    std::size_t first_pos = 1; // inclusive
    std::size_t end_pos = 1;   // exclusive
    std::map<Word, std::uint64_t> counts;

    std::uint64_t windows() const { return end_pos - first_pos; }

    Rational frequency(const Word& w) const {
        auto it = counts.find(w);
        std::uint64_t c = it == counts.end() ? 0 : it->second;
        return make_rational(big_from_u64(c), big_from_u64(windows()));
    }

    void merge(const CylinderStats& other) {
        if (other.k != k) fail(errc::bad_params, "merging cylinder stats of different k");
        if (other.first_pos != end_pos) fail(errc::bad_params, "merging non-adjacent cylinder stats");
        end_pos = other.end_pos;
        for (const auto& [w, c] : other.counts) counts[w] += c;
    }
};

inline CylinderStats cylinder_stats_range(BasicSequence& seq, std::size_t k, std::size_t first_pos,
                                          std::size_t end_pos) {
    if (k == 0) fail(errc::bad_params, "cylinder stats need k >= 1");
    CylinderStats st;
    st.k = k;
    st.first_pos = first_pos;
    st.end_pos = end_pos;
    if (end_pos <= first_pos) return st;
    const auto& pref = seq.prefix(end_pos - 1 + k - 1); // last window covers end_pos-1 .. end_pos+k-2
    Word w(k);
    for (std::size_t p = first_pos; p < end_pos; ++p) {
        for (std::size_t i = 0; i < k; ++i) w[i] = pref[p - 1 + i];
        ++st.counts[w];
    }
    return st;
}

// Window counts over start positions 1..N (prefix of length N+k-1).
inline CylinderStats cylinder_stats(BasicSequence& seq, std::size_t k, std::size_t N) {
    return cylinder_stats_range(seq, k, 1, N + 1);
}

// ---------------------------------------------------------------------------
// Empirical check of the dynamical-generation conditions: (i) block
// frequencies stabilize between N/2 and N, (ii) no occurring block has
// near-zero frequency, (iii) frequencies at each length sum to 1 exactly.
// The verdict is evidence, never a proof.

struct DynGenBlockFlag {
    Word block;
    Rational frequency;
};

struct DynGenLevel {
    std::size_t k = 1;
    bool stable = true;           // condition (i)
    bool positive = true;         // condition (ii)
    bool sums_to_one = false;     // condition (iii), exact
    Rational max_drift;           // max |d_N(w) - d_{N/2}(w)|
    std::vector<DynGenBlockFlag> suspects; // blocks below the floor
};

struct DynGenReport {
    std::size_t N = 0;
    Rational tolerance;
    Rational density_floor;
    std::vector<DynGenLevel> levels;
    bool pass_stability = true;
    bool pass_positivity = true;
    bool pass_tiling = true;
};

inline DynGenReport check_dynamic_generation(BasicSequence& seq, std::size_t k_max, std::size_t N,
                                             const Rational& tol,
                                             const Rational& density_floor = make_rational(1, 100)) {
    if (N < 2 * k_max) fail(errc::bad_params, "need N >= 2*k_max");
    DynGenReport rep;
    rep.N = N;
    rep.tolerance = tol;
    rep.density_floor = density_floor;
    for (std::size_t k = 1; k <= k_max; ++k) {
        DynGenLevel level;
        level.k = k;
        CylinderStats full = cylinder_stats(seq, k, N);
        CylinderStats half = cylinder_stats(seq, k, N / 2);
        Rational sum = 0;
        level.max_drift = 0;
        for (const auto& [w, c] : full.counts) {
            Rational fN = make_rational(big_from_u64(c), big_from_u64(full.windows()));
            sum += fN;
            Rational drift = abs_diff(fN, half.frequency(w));
            if (drift > level.max_drift) level.max_drift = drift;
            if (drift > tol) level.stable = false;
            if (fN < density_floor) {
                level.positive = false;
                level.suspects.push_back({w, fN});
            }
        }
        level.sums_to_one = (sum == 1);
        rep.pass_stability = rep.pass_stability && level.stable;
        rep.pass_positivity = rep.pass_positivity && level.positive;
        rep.pass_tiling = rep.pass_tiling && level.sums_to_one;
        rep.levels.push_back(std::move(level));
    }
    return rep;
}

} // namespace cantor
