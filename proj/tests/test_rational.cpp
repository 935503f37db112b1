#include <doctest.h>

#include <cantor/rational.hpp>

using namespace cantor;

TEST_SUITE("rational") {

TEST_CASE("construction reduces and normalizes sign") {
    Rational r = make_rational(BigInt(4), BigInt(-6));
    CHECK(r.get_num() == -2);
    CHECK(r.get_den() == 3);
    CHECK(gcd(BigInt(r.get_num()), BigInt(r.get_den())) == 1);
}

TEST_CASE("parsing p/q strings") {
    CHECK(parse_rational("5/6") == make_rational(5, 6));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("10/4") == make_rational(5, 2));
    CHECK_THROWS_AS(parse_rational("x"), error);
}

TEST_CASE("floor and frac") {
    CHECK(floor_to_int(make_rational(7, 2)) == 3);
    CHECK(floor_to_int(make_rational(-7, 2)) == -4);
    CHECK(frac(make_rational(-1, 3)) == make_rational(2, 3));
    CHECK(frac(make_rational(5, 3)) == make_rational(2, 3));
    CHECK(ceil_to_int(make_rational(7, 2)) == 4);
}

TEST_CASE("64-bit round trips") {
    std::uint64_t v = 0xFEDCBA9876543210ull;
    CHECK(u64_from_big(big_from_u64(v)) == v);
    CHECK(u64_from_big(big_from_u64(0)) == 0);
    CHECK_THROWS_AS(u64_from_big(BigInt(-1)), error);
}

TEST_CASE("decimal rendering is for reports only") {
    CHECK(to_decimal_string(make_rational(1, 2), 3) == "0.500");
    CHECK(to_decimal_string(make_rational(2, 3), 3) == "0.667");
    CHECK(to_decimal_string(Rational(0), 2) == "0.00");
}

TEST_CASE("pow_big") {
    CHECK(pow_big(2, 10) == 1024);
    CHECK(pow_big(10, 0) == 1);
}

}
