#include "symdyn/coding.hpp"
#include "symdyn/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

using namespace symdyn;

namespace {

PiecewiseMonotoneMap full_shift() { return make_mod1(Rational(0), Rational(2)); }

PiecewiseMonotoneMap golden_map() {
    AlgebraicSpec phi;
    phi.minpoly = {Rational(-1), Rational(-1), Rational(1)};
    phi.bracket_lo = Rational(3, 2);
    phi.bracket_hi = Rational(17, 10);
    return make_beta(ParamValue(phi));
}

} // namespace

TEST_CASE("word text round trip") {
    const Word u = {1, 2, 1, 3};
    CHECK(word_to_string(u) == "1,2,1,3");
    CHECK(word_from_string("1,2,1,3") == u);
    CHECK(word_from_string("2") == Word{2});
    CHECK_THROWS_AS(word_from_string("1,,2"), std::domain_error);
    CHECK_THROWS_AS(word_from_string("1,x"), std::domain_error);
    CHECK_THROWS_AS(word_from_string(""), std::domain_error);
}

TEST_CASE("doubling map itineraries match direct iteration") {
    const PiecewiseMonotoneMap m = full_shift();
    const ItineraryResult r = itinerary(m, Scalar(Rational(1, 3)), 8);
    REQUIRE(r.ok);
    CHECK(r.word == Word{1, 2, 1, 2, 1, 2, 1, 2});

    const oracle::Mod1Oracle ref{Rational(0), Rational(2)};
    CHECK(r.word == ref.itinerary(Rational(1, 3), 8));

    // 1/4 reaches the breakpoint 1/2 after one step
    const ItineraryResult bad = itinerary(m, Scalar(Rational(1, 4)), 4);
    CHECK_FALSE(bad.ok);
    CHECK(bad.boundary_step == 1);
}

TEST_CASE("doubling map cylinders are dyadic") {
    const PiecewiseMonotoneMap m = full_shift();
    const CylinderResult c = cylinder_interval(m, {1, 2, 1});
    REQUIRE_FALSE(c.empty);
    CHECK(c.interval.lo.rat() == Rational(1, 4));
    CHECK(c.interval.hi.rat() == Rational(3, 8));
    for (int n = 1; n <= 12; ++n) {
        Word u;
        for (int i = 0; i < n; ++i) u.push_back(1 + (i % 2));
        const CylinderResult cn = cylinder_interval(m, u);
        REQUIRE_FALSE(cn.empty);
        CHECK(iv_width(cn.interval).rat() == Rational(1, 1L << n));
    }
}

TEST_CASE("cylinder midpoints reproduce their words") {
    const PiecewiseMonotoneMap m = make_mod1(Rational(1, 10), Rational(5, 2));
    const oracle::Mod1Oracle ref{Rational(1, 10), Rational(5, 2)};
    const std::vector<Word> words = enumerate_words(m, 6);
    CHECK(words.size() == ref.count_words(6));
    for (const Word& u : words) {
        const CylinderResult c = cylinder_interval(m, u);
        REQUIRE_FALSE(c.empty);
        const Rational mid = (c.interval.lo.rat() + c.interval.hi.rat()) / 2;
        CHECK(ref.itinerary(mid, 6) == u);
    }
}

TEST_CASE("enumeration is lexicographic and complete") {
    const PiecewiseMonotoneMap m = full_shift();
    const std::vector<Word> words = enumerate_words(m, 3);
    REQUIRE(words.size() == 8);
    CHECK(words.front() == Word{1, 1, 1});
    CHECK(words.back() == Word{2, 2, 2});
    CHECK(std::is_sorted(words.begin(), words.end()));
}

TEST_CASE("golden language has Fibonacci growth and no 2,2 factor") {
    const PiecewiseMonotoneMap m = golden_map();
    for (int n = 1; n <= 10; ++n) {
        const std::vector<Word> words = enumerate_words(m, n);
        CHECK(words.size() == oracle::golden_word_count(n));
        for (const Word& u : words)
            for (std::size_t i = 0; i + 1 < u.size(); ++i)
                CHECK_FALSE((u[i] == 2 && u[i + 1] == 2));
    }
    CHECK_FALSE(is_admissible(m, {2, 2}));
    CHECK(is_admissible(m, {2, 1, 2}));
    CHECK(cylinder_interval(m, {2, 2}).empty);
}

TEST_CASE("inadmissible prefixes kill extensions") {
    const PiecewiseMonotoneMap m = golden_map();
    CHECK_FALSE(is_admissible(m, {2, 2, 1}));
    CHECK_FALSE(is_admissible(m, {1, 2, 2}));
}

TEST_CASE("word symbols outside 1..k are rejected") {
    const PiecewiseMonotoneMap m = full_shift();
    CHECK_THROWS_AS(cylinder_interval(m, {1, 3}), std::domain_error);
    CHECK_THROWS_AS(cylinder_interval(m, {0}), std::domain_error);
}

TEST_CASE("enumeration length cap throws") {
    const PiecewiseMonotoneMap m = full_shift();
    CHECK_THROWS_AS(enumerate_words(m, 25), resource_error);
    CHECK_THROWS_AS(enumerate_words(m, 12, 24, 100), resource_error); // word cap
}
