#pragma once
// Exact Cantor-series engine: x = sum x_n / (q_1 q_2 ... q_n) with
// 0 <= x_n < q_n and no eventual all-(q_n - 1) tail. Everything here is
// exact rational arithmetic; procedurally-defined numbers answer interval
// queries only.
//
// Digit positions are 1-based throughout (x_1 is the first digit).

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "sequence.hpp"

namespace cantor {

using Digit = std::uint64_t;
using DigitWord = std::vector<Digit>;

// ---------------------------------------------------------------------------
// Digit sources: buffered 1-based digit access.

class DigitSource {
public:
    virtual ~DigitSource() = default;

    // x_pos, pos >= 1; throws source_exhausted when not available.
    Digit digit(std::size_t pos) {
        ensure(pos);
        return buffer_[pos - 1];
    }

    const std::vector<Digit>& prefix(std::size_t n) {
        ensure(n);
        return buffer_;
    }

    void ensure(std::size_t n) {
        if (buffer_.size() >= n) return;
        std::size_t want = std::max<std::size_t>(n, buffer_.size() + buffer_.size() / 2 + 16);
        refill(buffer_, n, want);
        if (buffer_.size() < n)
            fail(errc::source_exhausted, "digit source ended at position " +
                                             std::to_string(buffer_.size()));
    }

protected:
    // Extend out to at least `need` digits; `want` is a growth hint.
    virtual void refill(std::vector<Digit>& out, std::size_t need, std::size_t want) = 0;

private:
    std::vector<Digit> buffer_;
};

class VectorDigits final : public DigitSource {
public:
    explicit VectorDigits(std::vector<Digit> digits) : digits_(std::move(digits)) {}

protected:
    void refill(std::vector<Digit>& out, std::size_t /*need*/, std::size_t want) override {
        std::size_t take = std::min(want, digits_.size());
        out.assign(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(take));
    }

private:
    std::vector<Digit> digits_;
};

class FunctionDigits final : public DigitSource {
public:
    // fn(pos) -> x_pos with pos >= 1
    explicit FunctionDigits(std::function<Digit(std::size_t)> fn) : fn_(std::move(fn)) {}

protected:
    void refill(std::vector<Digit>& out, std::size_t /*need*/, std::size_t want) override {
        while (out.size() < want) out.push_back(fn_(out.size() + 1));
    }

private:
    std::function<Digit(std::size_t)> fn_;
};

// ---------------------------------------------------------------------------
// Greedy digit extraction for exact rationals: x_i = floor(q_i r), r <- q_i r - x_i.
// The remainder always has the denominator of x, so the state is one big
// integer numerator. The greedy expansion is automatically canonical.

class RationalDigits final : public DigitSource {
public:
    RationalDigits(const Rational& x, BasicSequence seq) : seq_(std::move(seq)) {
        if (!in_unit_interval(x)) fail(errc::out_of_range, "expansion domain is [0,1)");
        num_ = x.get_num();
        den_ = x.get_den();
    }

protected:
    void refill(std::vector<Digit>& out, std::size_t need, std::size_t want) override {
        while (out.size() < want) {
            Base q;
            try {
                q = seq_.q(out.size() + 1);
            } catch (const error&) {
                if (out.size() >= need) return; // growth hint clipped by the sequence
                throw;
            }
            BigInt scaled = num_ * big_from_u64(q);
            BigInt digit, rem;
            mpz_fdiv_qr(digit.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), den_.get_mpz_t());
            out.push_back(u64_from_big(digit));
            num_ = rem;
        }
    }

private:
    BasicSequence seq_;
    BigInt num_, den_;
};

inline DigitWord digits_of(const Rational& x, BasicSequence& seq, std::size_t n) {
    RationalDigits src(x, seq.clone());
    const auto& pref = src.prefix(n);
    return DigitWord(pref.begin(), pref.begin() + static_cast<std::ptrdiff_t>(n));
}

// ---------------------------------------------------------------------------
// Partial sums. value_of(digits, Q, n) = sum_{i<=n} x_i / M_i, evaluated by a
// backward Horner pass so intermediate denominators never exceed M_n.

inline Rational value_of(const DigitWord& digits, BasicSequence& seq, std::size_t n) {
    if (n > digits.size()) fail(errc::bad_params, "value_of: fewer digits than requested");
    seq.ensure(n);
    Rational v = 0;
    for (std::size_t i = n; i >= 1; --i) {
        Base q = seq.q(i);
        if (digits[i - 1] >= q)
            fail(errc::inadmissible_digit, "digit x_" + std::to_string(i) + " >= q_" + std::to_string(i));
        v = (Rational(big_from_u64(digits[i - 1])) + v) / Rational(big_from_u64(q));
    }
    return v;
}

inline Rational value_of(const DigitWord& digits, BasicSequence& seq) {
    return value_of(digits, seq, digits.size());
}

// ---------------------------------------------------------------------------
// Orbit points for exact rationals: q_n...q_1 x mod 1 = (M_n p mod q)/q,
// maintained by modular reduction so the cost per step is independent of n.

inline Rational orbit_point(const Rational& x, BasicSequence& seq, std::size_t n) {
    if (!in_unit_interval(x)) fail(errc::out_of_range, "orbit domain is [0,1)");
    BigInt num = x.get_num();
    const BigInt den = x.get_den();
    seq.ensure(n);
    for (std::size_t i = 1; i <= n; ++i) {
        num *= big_from_u64(seq.q(i));
        num %= den;
    }
    return make_rational(num, den);
}

// Streaming version: current() == orbit_point(x, seq, index()).
class OrbitWalker {
public:
    OrbitWalker(const Rational& x, BasicSequence seq) : seq_(std::move(seq)) {
        if (!in_unit_interval(x)) fail(errc::out_of_range, "orbit domain is [0,1)");
        num_ = x.get_num();
        den_ = x.get_den();
    }

    Rational current() const { return make_rational(num_, den_); }
    std::size_t index() const { return n_; }

    void step() {
        num_ *= big_from_u64(seq_.q(n_ + 1));
        num_ %= den_;
        ++n_;
    }

private:
    BasicSequence seq_;
    BigInt num_, den_;
    std::size_t n_ = 0;
};

// ---------------------------------------------------------------------------
// Interval answers for procedural numbers. The tail after position n is
//   t_n = sum_{i>=1} x_{n+i} / (q_{n+1} ... q_{n+i})  in [0,1),
// and the truncation after m terms brackets it inside a half-open interval
// of width 1/(q_{n+1}...q_{n+m}).

struct UnitInterval {
    Rational lo;    // inclusive
    Rational width; // hi = lo + width, exclusive

    Rational hi() const { return lo + width; }
    bool contains(const Rational& x) const { return x >= lo && x < lo + width; }
};

inline UnitInterval orbit_interval_from_digits(DigitSource& digits, BasicSequence& seq,
                                               std::size_t n, const Rational& eps) {
    if (eps <= 0) fail(errc::bad_params, "eps must be positive");
    if (eps >= 1) return {Rational(0), Rational(1)};
    // choose m with prod_{i=1..m} q_{n+i} >= 1/eps
    BigInt prod = 1;
    BigInt target = ceil_to_int(Rational(1) / eps);
    std::size_t m = 0;
    for (;;) {
        ++m;
        Base q;
        try {
            q = seq.q(n + m);
            digits.ensure(n + m);
        } catch (const error& e) {
            if (e.code() == errc::source_exhausted || e.code() == errc::horizon_exceeded)
                fail(errc::precision_unreachable,
                     std::string("not enough tail digits for the requested width: ") + e.what());
            throw;
        }
        prod *= big_from_u64(q);
        if (prod >= target) break;
    }
    Rational lo = 0;
    for (std::size_t i = m; i >= 1; --i) {
        Base q = seq.q(n + i);
        Digit d = digits.digit(n + i);
        if (d >= q) fail(errc::inadmissible_digit, "digit at position " + std::to_string(n + i));
        lo = (Rational(big_from_u64(d)) + lo) / Rational(big_from_u64(q));
    }
    return {lo, make_rational(BigInt(1), prod)};
}

// ---------------------------------------------------------------------------
// Canonical form. A finite digit list means "x followed by zeros" unless
// all_max_tail marks an eventual all-(q-1) tail starting right after it, in
// which case the carry is folded in: value is preserved exactly.

inline DigitWord canonicalize(const DigitWord& digits, BasicSequence& seq, bool all_max_tail = false) {
    DigitWord out = digits;
    seq.ensure(out.size());
    for (std::size_t i = 1; i <= out.size(); ++i)
        if (out[i - 1] >= seq.q(i))
            fail(errc::inadmissible_digit, "digit x_" + std::to_string(i) + " >= q_" + std::to_string(i));
    if (!all_max_tail) return out;
    // ...x_k (q-1)(q-1)... == ...(x_k + 1) 0 0 ...  at the last non-max slot
    std::size_t i = out.size();
    while (i >= 1 && out[i - 1] == seq.q(i) - 1) --i;
    if (i == 0)
        fail(errc::out_of_range, "all-max tail over the whole expansion equals 1, outside [0,1)");
    out[i - 1] += 1;
    for (std::size_t j = i; j < out.size(); ++j) out[j] = 0;
    return out;
}

// Detects an eventual all-max suffix inside a finite digit list and carries
// it, treating the suffix as the start of an infinite max tail.
inline DigitWord canonicalize_detect(const DigitWord& digits, BasicSequence& seq) {
    if (digits.empty()) return digits;
    seq.ensure(digits.size());
    std::size_t i = digits.size();
    while (i >= 1 && digits[i - 1] == seq.q(i) - 1) --i;
    if (i == digits.size()) return digits; // no max suffix
    DigitWord head(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(i));
    DigitWord out = canonicalize(head, seq, /*all_max_tail=*/true);
    out.resize(digits.size(), 0);
    return out;
}

// ---------------------------------------------------------------------------
// CantorReal: a number in [0,1) paired with its basic sequence. Exact
// rationals also carry their value; procedural numbers only their digits.

class CantorReal {
public:
    static CantorReal from_rational(const Rational& x, const GeneratorSpec& spec) {
        CantorReal r(spec);
        r.value_ = x;
        r.digits_ = std::make_shared<RationalDigits>(x, BasicSequence(spec));
        return r;
    }

    static CantorReal from_digits(std::vector<Digit> digits, const GeneratorSpec& spec) {
        CantorReal r(spec);
        r.digits_ = std::make_shared<VectorDigits>(std::move(digits));
        return r;
    }

    static CantorReal procedural(std::function<Digit(std::size_t)> fn, const GeneratorSpec& spec) {
        CantorReal r(spec);
        r.digits_ = std::make_shared<FunctionDigits>(std::move(fn));
        return r;
    }

    BasicSequence& sequence() { return *seq_; }
    DigitSource& digits() { return *digits_; }
    bool has_exact_value() const { return value_.has_value(); }
    const Rational& exact_value() const {
        if (!value_) fail(errc::precision_unreachable, "procedural number has no exact value");
        return *value_;
    }

private:
    explicit CantorReal(const GeneratorSpec& spec) : seq_(std::make_shared<BasicSequence>(spec)) {}

    std::shared_ptr<BasicSequence> seq_;
    std::shared_ptr<DigitSource> digits_;
    std::optional<Rational> value_;
};

} // namespace cantor
