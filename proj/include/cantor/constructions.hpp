#pragma once
// Executable counterexample constructions, each emitting a basic-sequence
// prefix paired with a digit stream ready for the analyzers. Every
// construction is a pure function of (parameters, seed); re-runs are
// bit-identical.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expansion.hpp"
#include "rational.hpp"
#include "sequence.hpp"

namespace cantor {

struct ConstructionOutput {
    std::vector<Base> bases;
    std::vector<Digit> digits;
    std::vector<std::uint64_t> exponents; // g-power constructions only
    Base g = 0;                           // g-power constructions only
    std::uint64_t seed = 0;
    std::map<std::string, std::string> info;            // parameters, notes
    std::vector<std::pair<std::string, Rational>> targets; // named limit values
};

// Digit source over a concatenation stream (champernowne base 4 is the
// default normal input for the two branching constructions).
class ConcatDigitSource final : public DigitSource {
public:
    ConcatDigitSource(ConcatKind kind, unsigned radix) : kind_(kind), radix_(radix) {}

protected:
    void refill(std::vector<Digit>& out, std::size_t /*need*/, std::size_t want) override {
        out = concatenation_digits(kind_, radix_, want);
    }

private:
    ConcatKind kind_;
    unsigned radix_;
};

// ---------------------------------------------------------------------------
// Branching constructions driven by a base-4 digit stream. Step n inspects
// the n-th base-4 digit d_n of y (d_n encodes which quarter 4^{n-1}y mod 1
// falls into) and appends one base-4 position or two base-2 positions. The
// residual after each step is exactly the next base-4 tail, so the emitted
// digit stream is the genuine base-Q expansion of y.

// Digits 2 and 3 (second half) split into two binary digits (1, d-2); the
// emitted Q-digits never contain a value >= 2.
inline ConstructionOutput build_ex31(DigitSource& y4, std::size_t steps) {
    ConstructionOutput out;
    out.info["construction"] = "ex31";
    out.info["steps"] = std::to_string(steps);
    out.bases.reserve(steps + steps / 2);
    out.digits.reserve(steps + steps / 2);
    const auto& d4 = y4.prefix(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        Digit d = d4[n];
        if (d >= 4) fail(errc::inadmissible_digit, "ex31 input digit >= 4");
        if (d < 2) {
            out.bases.push_back(4);
            out.digits.push_back(d);
        } else {
            out.bases.push_back(2);
            out.bases.push_back(2);
            out.digits.push_back(1);
            out.digits.push_back(d - 2);
        }
    }
    out.targets.push_back({"bases_per_step", make_rational(3, 2)});
    return out;
}

// Two-step branch on the quarter [1/4, 1/2) (base-4 digit 1), optionally
// gated by M(n) < C n. Limit orbit mass of [0, 1/2) is 2/5, or 1/(2C) for
// the gated variant.
inline ConstructionOutput build_ex32(DigitSource& y4, std::size_t steps,
                                     const std::optional<Rational>& C = {}) {
    if (C && (*C <= 1 || *C >= make_rational(5, 4)))
        fail(errc::bad_params, "threshold C must lie in (1, 5/4)");
    ConstructionOutput out;
    out.info["construction"] = C ? "ex32_variant" : "ex32";
    out.info["steps"] = std::to_string(steps);
    if (C) out.info["C"] = to_string(*C);
    const auto& d4 = y4.prefix(steps);
    for (std::size_t n = 1; n <= steps; ++n) {
        Digit d = d4[n - 1];
        if (d >= 4) fail(errc::inadmissible_digit, "ex32 input digit >= 4");
        bool two_step = (d == 1);
        if (two_step && C) {
            // M(n) < C n on exact rationals: M * den < num * n
            BigInt lhs = big_from_u64(out.bases.size()) * BigInt(C->get_den());
            BigInt rhs = BigInt(C->get_num()) * big_from_u64(n);
            two_step = lhs < rhs;
        }
        if (two_step) {
            out.bases.push_back(2);
            out.bases.push_back(2);
            out.digits.push_back(0);
            out.digits.push_back(1);
        } else {
            out.bases.push_back(4);
            out.digits.push_back(d);
        }
    }
    if (C) {
        out.targets.push_back({"density_below_half", Rational(1) / *C});
        out.targets.push_back({"density_above_half", 2 - Rational(1) / *C});
        out.targets.push_back({"mass_first_half", Rational(1) / (2 * *C)});
        out.targets.push_back({"bases_per_step", *C});
    } else {
        out.targets.push_back({"density_below_half", make_rational(4, 5)});
        out.targets.push_back({"density_above_half", make_rational(6, 5)});
        out.targets.push_back({"mass_first_half", make_rational(2, 5)});
        out.targets.push_back({"bases_per_step", make_rational(5, 4)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// i.i.d. bases uniform on {a, b} with digit laws biased by +-eps on digits 0
// and 1. Q-normal (all single-digit frequencies hit (a+b)/(2ab) resp. 1/(2b))
// but the orbit mass of [0, 1/a) converges to 1/a + eps/2.

inline ConstructionOutput build_ex35(Base a, Base b, const Rational& eps, std::uint64_t seed,
                                     std::size_t n) {
    if (a < 2 || b <= a) fail(errc::bad_params, "need 2 <= a < b");
    if (!(eps > 0) || eps > make_rational(1, 1) / Rational(big_from_u64(b)))
        fail(errc::bad_params, "need 0 < eps <= 1/b");
    Rational inv_a = Rational(1) / Rational(big_from_u64(a));
    Rational inv_b = Rational(1) / Rational(big_from_u64(b));

    auto digit_weights = [&](Base base, const Rational& inv) {
        std::vector<Rational> w(base, inv);
        w[0] = (base == a) ? Rational(inv + eps) : Rational(inv - eps);
        w[1] = (base == a) ? Rational(inv - eps) : Rational(inv + eps);
        return w;
    };
    CategoricalSampler base_pick({make_rational(1, 2), make_rational(1, 2)});
    CategoricalSampler digit_a(digit_weights(a, inv_a));
    CategoricalSampler digit_b(digit_weights(b, inv_b));

    ConstructionOutput out;
    out.seed = seed;
    out.info["construction"] = "ex35";
    out.info["a"] = std::to_string(a);
    out.info["b"] = std::to_string(b);
    out.info["eps"] = to_string(eps);
    out.bases.reserve(n);
    out.digits.reserve(n);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        bool use_a = base_pick.sample(rng.next()) == 0;
        out.bases.push_back(use_a ? a : b);
        out.digits.push_back(use_a ? digit_a.sample(rng.next()) : digit_b.sample(rng.next()));
    }
    Rational digit0 = make_rational(big_from_u64(a + b), big_from_u64(2 * a * b));
    out.targets.push_back({"digit_frequency_below_a", digit0});
    out.targets.push_back({"digit_frequency_a_to_b", make_rational(1, 2) * inv_b});
    out.targets.push_back({"orbit_mass_below_1_over_a", inv_a + eps / 2});
    return out;
}

// ---------------------------------------------------------------------------
// Heavy-tailed exponent law P(a = k) proportional to 1/k^2 on [1, k_max]:
// propose k = floor(2^64 / (u+1)) (P(k) = 1/k - 1/(k+1)), reject k > k_max,
// accept with probability (k+1)/(2k) by exact 128-bit comparison. A finite
// truncation stands in for an infinite-mean law; the mean drifts upward with
// the sample size until k_max saturates, and that drift is the observable.

inline std::uint64_t sample_heavy_exponent(SplitMix64& rng, std::uint64_t k_max) {
    for (;;) {
        std::uint64_t u = rng.next();
        unsigned __int128 k128 = ((unsigned __int128)1 << 64) / ((unsigned __int128)u + 1);
        if (k128 > k_max) continue;
        std::uint64_t k = static_cast<std::uint64_t>(k128);
        std::uint64_t v = rng.next();
        // accept iff v/2^64 < (k+1)/(2k)
        unsigned __int128 lhs = (unsigned __int128)v * (2 * (unsigned __int128)k);
        unsigned __int128 rhs = ((unsigned __int128)(k + 1)) << 64;
        if (lhs < rhs) return k;
    }
}

// Variant (i): base-g digit stream over N exponent blocks; digits in blocks
// whose exponent repeats the first exponent are forced to 0, all others are
// uniform. The stream looks g-normal along a full-density set of positions
// but fails Q-normality at the a_1-blocks.
inline ConstructionOutput build_ex36i(Base g, std::uint64_t seed, std::size_t blocks,
                                      std::uint64_t k_max = 1 << 16) {
    if (g < 2) fail(errc::bad_params, "g must be >= 2");
    if (k_max < 2) fail(errc::bad_params, "k_max must be >= 2");
    ConstructionOutput out;
    out.seed = seed;
    out.g = g;
    out.info["construction"] = "ex36i";
    out.info["g"] = std::to_string(g);
    out.info["k_max"] = std::to_string(k_max);
    out.info["truncation_note"] =
        "finite k_max stands in for an infinite-mean exponent law; the empirical mean of "
        "log q_n drifts upward with N";
    SplitMix64 rng(seed);
    out.exponents.reserve(blocks);
    std::uint64_t a1 = 0;
    for (std::size_t m = 0; m < blocks; ++m) {
        std::uint64_t e = sample_heavy_exponent(rng, k_max);
        if (m == 0) a1 = e;
        out.exponents.push_back(e);
        if (e == a1) {
            for (std::uint64_t i = 0; i < e; ++i) out.digits.push_back(0);
        } else {
            for (std::uint64_t i = 0; i < e; ++i) out.digits.push_back(rng.below(g));
        }
    }
    out.info["a1"] = std::to_string(a1);
    return out;
}

// Variant (ii): digits over the g-power sequence are uniform except along
// windows of fresh bases, which are zeroed until the digit mass of
// already-seen bases is less than 1/m of the fresh-base mass. Checkpoints
// actually reached at this scale are recorded in `info`.
inline ConstructionOutput build_ex36ii(Base g, std::uint64_t seed, std::size_t blocks,
                                       std::uint64_t k_max = 1 << 16) {
    if (g < 2) fail(errc::bad_params, "g must be >= 2");
    ConstructionOutput out;
    out.seed = seed;
    out.g = g;
    out.info["construction"] = "ex36ii";
    out.info["g"] = std::to_string(g);
    out.info["k_max"] = std::to_string(k_max);
    SplitMix64 rng(seed);
    out.exponents.reserve(blocks);
    for (std::size_t m = 0; m < blocks; ++m)
        out.exponents.push_back(sample_heavy_exponent(rng, k_max));

    // Level m freezes the set of bases seen by N_m; positions after N_m whose
    // base is outside it are zeroed until the digit mass of frozen bases over
    // [1, n] drops below 1/m of the fresh-base mass, which closes the window.
    std::set<std::uint64_t> seen;
    std::uint64_t level = 1;      // current m
    std::size_t window_start = 1; // N_m (1-based position)
    seen.insert(out.exponents[0]);
    std::set<std::uint64_t> frozen_seen = seen; // complement of A_m
    unsigned __int128 seen_mass = 0, fresh_mass = 0, total_mass = 0;
    std::string checkpoints;

    for (std::size_t n = 1; n <= blocks; ++n) {
        std::uint64_t e = out.exponents[n - 1];
        total_mass += e;
        bool fresh = !frozen_seen.count(e);
        if (fresh)
            fresh_mass += e;
        else
            seen_mass += e;
        bool zero_here = fresh && n > window_start;
        for (std::uint64_t i = 0; i < e; ++i)
            out.digits.push_back(zero_here ? 0 : rng.below(g));
        seen.insert(e);
        // checkpoint N'_{m+1}: mass of frozen bases < (1/m) * mass of fresh bases
        if (n > window_start && fresh_mass > 0 && seen_mass * level < fresh_mass) {
            if (!checkpoints.empty()) checkpoints += ",";
            checkpoints += std::to_string(n);
            ++level;
            window_start = n;
            frozen_seen = seen;
            // masses restart against the new frozen set: everything up to n is seen
            seen_mass = total_mass;
            fresh_mass = 0;
        }
    }
    out.info["checkpoints"] = checkpoints;
    out.info["levels_reached"] = std::to_string(level - 1);
    return out;
}

// ---------------------------------------------------------------------------
// Value-preserving digit transduction from base G to a periodic pattern with
// period product G: source digit d maps to the unique admissible digit tuple
// with the same value contribution (most significant first).

inline std::vector<Digit> rebase(const std::vector<Digit>& source, Base source_radix,
                                 const std::vector<Base>& pattern) {
    if (pattern.empty()) fail(errc::bad_params, "empty rebase pattern");
    unsigned __int128 prod = 1;
    for (Base b : pattern) {
        if (b < 2) fail(errc::bad_params, "pattern base < 2");
        prod *= b;
        if (prod > (unsigned __int128)~std::uint64_t(0))
            fail(errc::bad_params, "pattern product overflows");
    }
    if (prod != source_radix)
        fail(errc::mismatched_radix, "pattern product must equal the source radix");
    std::vector<Digit> out;
    out.reserve(source.size() * pattern.size());
    for (Digit d : source) {
        if (d >= source_radix) fail(errc::inadmissible_digit, "source digit >= radix");
        std::uint64_t rest = d;
        std::uint64_t divisor = source_radix;
        for (Base b : pattern) {
            divisor /= b;
            out.push_back(rest / divisor);
            rest %= divisor;
        }
    }
    return out;
}

} // namespace cantor
