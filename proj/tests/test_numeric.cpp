#include "symdyn/numeric.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace symdyn;

TEST_CASE("rational parsing") {
    CHECK(parse_rational("1/10") == Rational(1, 10));
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("-2/4") == Rational(-1, 2));
    CHECK(parse_rational("1.6") == Rational(8, 5));
    CHECK(parse_rational("0.125") == Rational(1, 8));
    CHECK(looks_rational("5/2"));
    CHECK_THROWS_AS(parse_rational("x"), std::exception);
    CHECK_THROWS_AS(parse_rational("1/0"), std::exception);
}

TEST_CASE("rational round trip through text") {
    const Rational r(22, 7);
    CHECK(parse_rational(rational_to_string(r)) == r);
    CHECK(rational_to_string(Rational(-3, 4)) == "-3/4");
}

TEST_CASE("scalar text is lossless in both regimes") {
    const NumberPolicy ex = NumberPolicy::exact();
    const Scalar a = scalar_from_string("7/3", ex);
    CHECK(a.is_exact());
    CHECK(scalar_from_string(scalar_to_string(a), ex) == a);

    const NumberPolicy ap = NumberPolicy::approx();
    ScopedPrecision guard(ap.precision_bits);
    const Scalar b = scalar_from_string("0.1", ap);
    CHECK_FALSE(b.is_exact());
    const Scalar b2 = scalar_from_string(scalar_to_string(b), ap);
    CHECK(b2.big() == b.big());
    // decimals become exact fractions in exact mode
    CHECK(scalar_from_string("0.1", ex).rat() == Rational(1, 10));
}

TEST_CASE("scalar arithmetic promotes mixed operands") {
    ScopedPrecision guard(128);
    const Scalar r(Rational(1, 3));
    const Scalar f(BigFloat(0.5));
    CHECK((r + r).is_exact());
    CHECK_FALSE((r + f).is_exact());
    CHECK((r * Scalar(3)).rat() == Rational(1));
    CHECK(abs(Scalar(-4)).rat() == Rational(4));
    CHECK(ceil_to_long(Scalar(Rational(7, 2))) == 4);
    CHECK(ceil_to_long(Scalar(Rational(4))) == 4);
}

TEST_CASE("scalar comparisons are exact for rationals") {
    const Scalar a(Rational(1, 3));
    const Scalar b(Rational(333333333333333333L, 1000000000000000000L));
    CHECK(b < a);
    CHECK(a == Scalar(Rational(2, 6)));
}

TEST_CASE("interval helpers under the exact policy") {
    const NumberPolicy ex = NumberPolicy::exact();
    const Interval iv{Scalar(Rational(1, 4)), Scalar(Rational(3, 4))};
    CHECK(iv_width(iv).rat() == Rational(1, 2));
    CHECK_FALSE(iv_empty(iv, ex));
    CHECK(iv_empty(Interval{Scalar(1), Scalar(1)}, ex));
    CHECK(iv_empty(Interval{Scalar(2), Scalar(1)}, ex));

    const Interval cut = iv_intersect(iv, Interval{Scalar(Rational(1, 2)), Scalar(1)});
    CHECK(cut.lo.rat() == Rational(1, 2));
    CHECK(cut.hi.rat() == Rational(3, 4));

    CHECK(iv_same(iv, Interval{Scalar(Rational(1, 4)), Scalar(Rational(3, 4))}, ex));
    CHECK_FALSE(iv_same(iv, cut, ex));
    CHECK(iv_contains_closed(iv, Scalar(Rational(1, 4))));
    CHECK(iv_contains_closed(iv, Scalar(Rational(1, 2))));
    CHECK_FALSE(iv_contains_closed(iv, Scalar(Rational(7, 8))));
}

TEST_CASE("approx emptiness suppresses slivers near the tolerance") {
    const NumberPolicy ap = NumberPolicy::approx(128, 1e-24);
    ScopedPrecision guard(ap.precision_bits);
    const Interval sliver{Scalar(BigFloat(0.5)), Scalar(BigFloat(0.5) + BigFloat(1e-24))};
    CHECK(iv_empty(sliver, ap)); // width within 10x tolerance
    const Interval real{Scalar(BigFloat(0.5)), Scalar(BigFloat(0.5) + BigFloat(1e-20))};
    CHECK_FALSE(iv_empty(real, ap));
    CHECK(iv_same(real, Interval{real.lo, Scalar(BigFloat(0.5) + BigFloat(1e-20))}, ap));
}

TEST_CASE("algebraic parameters realize to verified roots") {
    // t^2 - t - 1, positive root (1+sqrt 5)/2
    AlgebraicSpec golden;
    golden.minpoly = {Rational(-1), Rational(-1), Rational(1)};
    golden.bracket_lo = Rational(3, 2);
    golden.bracket_hi = Rational(17, 10);

    ScopedPrecision guard(192);
    const BigFloat x = realize_algebraic(golden, 192);
    CHECK(std::abs(double(x) - (1.0 + std::sqrt(5.0)) / 2.0) < 1e-15);
    const BigFloat residual = x * x - x - 1;
    CHECK(double(boost::multiprecision::abs(residual)) < 1e-45);

    AlgebraicSpec bad = golden;
    bad.bracket_lo = Rational(2);
    bad.bracket_hi = Rational(3);
    CHECK_THROWS_AS(realize_algebraic(bad, 128), std::domain_error);
}

TEST_CASE("polynomial evaluation is exact") {
    const std::vector<Rational> p = {Rational(-1), Rational(1), Rational(-2), Rational(1)};
    CHECK(eval_poly(p, Rational(2)) == Rational(1)); // -1 + 2 - 8 + 8
    CHECK(eval_poly(p, Rational(0)) == Rational(-1));
}

TEST_CASE("hex float text round trips bit for bit") {
    ScopedPrecision guard(128);
    const BigFloat x = BigFloat(1) / BigFloat(3);
    const std::string hex = bigfloat_to_hex(x);
    CHECK(bigfloat_from_hex(hex, 128) == x);
}

TEST_CASE("scoped precision restores the previous default") {
    const unsigned before = BigFloat::default_precision();
    {
        ScopedPrecision guard(256);
        CHECK(BigFloat::default_precision() == digits10_for_bits(256));
        CHECK(BigFloat::default_precision() >= 77);
    }
    CHECK(BigFloat::default_precision() == before);
}
