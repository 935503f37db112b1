#pragma once
// Exact arithmetic layer. Integers and rationals are GMP-backed; every value
// handled here is kept canonical (reduced, positive denominator). Decimal
// renderings exist for reports only and never feed back into computation.

#include <cstdint>
#include <string>
#include <gmpxx.h>

#include "errors.hpp"

namespace cantor {

using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) fail(errc::bad_params, "rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, unsigned long den) {
    return make_rational(BigInt(num), BigInt(den));
}

// Accepts "p/q" or a plain integer "p".
inline Rational parse_rational(const std::string& text) {
    Rational r;
    if (r.set_str(text, 10) != 0)
        fail(errc::bad_params, "cannot parse rational '" + text + "'");
    if (r.get_den() == 0) fail(errc::bad_params, "zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

inline BigInt floor_to_int(const Rational& x) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline BigInt ceil_to_int(const Rational& x) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

// Fractional part in [0,1), also for negative arguments.
inline Rational frac(const Rational& x) {
    Rational f = x - Rational(floor_to_int(x));
    f.canonicalize();
    return f;
}

inline bool in_unit_interval(const Rational& x) { return x >= 0 && x < 1; }

inline BigInt big_from_u64(std::uint64_t v) {
    BigInt lo(static_cast<unsigned long>(v & 0xffffffffull));
    BigInt hi(static_cast<unsigned long>(v >> 32));
    return (hi << 32) + lo;
}

inline BigInt pow_big(std::uint64_t base, unsigned long exp) {
    BigInt b = big_from_u64(base);
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), exp);
    return r;
}

inline std::uint64_t u64_from_big(const BigInt& v) {
    if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64)
        fail(errc::out_of_range, "value does not fit in 64 bits");
    BigInt lo = v & BigInt(0xffffffffL);
    BigInt hi = v >> 32;
    return (static_cast<std::uint64_t>(mpz_get_ui(hi.get_mpz_t())) << 32) |
           static_cast<std::uint64_t>(mpz_get_ui(lo.get_mpz_t()));
}

inline std::string to_string(const Rational& x) {
    return x.get_str();
}

// Fixed-point decimal rendering, reports only.
inline std::string to_decimal_string(const Rational& x, int digits = 9) {
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    Rational scaled = x * Rational(scale);
    BigInt rounded = floor_to_int(scaled + make_rational(1, 2));
    bool neg = rounded < 0;
    if (neg) rounded = -rounded;
    std::string raw = rounded.get_str();
    if (static_cast<int>(raw.size()) <= digits)
        raw.insert(0, std::string(digits + 1 - raw.size(), '0'));
    raw.insert(raw.size() - digits, ".");
    if (neg) raw.insert(0, "-");
    return raw;
}

inline double to_double(const Rational& x) { return x.get_d(); }

inline Rational abs_diff(const Rational& a, const Rational& b) {
    Rational d = a - b;
    if (d < 0) d = -d;
    return d;
}

} // namespace cantor
