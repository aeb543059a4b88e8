#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace symdyn {

using Rational = boost::multiprecision::mpq_rational;
using BigFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

enum class NumberMode { exact, approx };

// Arithmetic regime for one map and everything derived from it. Exact mode
// keeps all endpoints rational; approx mode computes with MPFR floats at
// precision_bits and compares with the given tolerance.
struct NumberPolicy {
    NumberMode mode = NumberMode::exact;
    unsigned precision_bits = 128;
    double tolerance = 0.0;

    static NumberPolicy exact() { return {NumberMode::exact, 128, 0.0}; }
    static NumberPolicy approx(unsigned bits = 128, double tol = 1e-24) {
        return {NumberMode::approx, bits, tol};
    }
    bool is_exact() const { return mode == NumberMode::exact; }
};

unsigned digits10_for_bits(unsigned bits);

// Sets the thread-default BigFloat precision for its lifetime. Every entry
// point that allocates BigFloats opens one of these from the active policy.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned bits);
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_digits10_;
};

// One number in either regime. A map's scalars are homogeneous (all rational
// or all BigFloat); mixed-operand arithmetic promotes to BigFloat.
class Scalar {
public:
    Scalar() : v_(Rational(0)) {}
    Scalar(int n) : v_(Rational(n)) {}
    Scalar(long n) : v_(Rational(n)) {}
    explicit Scalar(Rational r) : v_(std::move(r)) {}
    explicit Scalar(BigFloat b) : v_(std::move(b)) {}

    bool is_exact() const { return std::holds_alternative<Rational>(v_); }
    const Rational& rat() const { return std::get<Rational>(v_); }
    const BigFloat& big() const { return std::get<BigFloat>(v_); }

    double to_double() const;
    BigFloat to_bigfloat() const; // identity for BigFloat, exact conversion for Rational

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    Scalar operator-() const;

    friend bool operator==(const Scalar& a, const Scalar& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return cmp(a, b) != 0; }
    friend bool operator<(const Scalar& a, const Scalar& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Scalar& a, const Scalar& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Scalar& a, const Scalar& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Scalar& a, const Scalar& b) { return cmp(a, b) >= 0; }

private:
    static int cmp(const Scalar& a, const Scalar& b);
    std::variant<Rational, BigFloat> v_;
};

Scalar abs(const Scalar& x);
long ceil_to_long(const Scalar& x);

// Open interval (lo, hi); empty when hi <= lo (or within the width threshold
// in approx mode, see iv_empty).
struct Interval {
    Scalar lo, hi;
};

Scalar iv_width(const Interval& iv);
// Effective emptiness: exact mode hi <= lo; approx mode width <= 10*tolerance
// (suppresses phantom slivers created by rounding at branch endpoints).
bool iv_empty(const Interval& iv, const NumberPolicy& policy);
Interval iv_intersect(const Interval& a, const Interval& b);
// Endpoint identity: exact equality, or both endpoint gaps <= tolerance.
bool iv_same(const Interval& a, const Interval& b, const NumberPolicy& policy);
bool iv_contains_closed(const Interval& iv, const Scalar& x);

// --- parsing and exact serialization ---

// "p/q", integer, or plain decimal ("1.6" -> 8/5); exact.
Rational parse_rational(const std::string& text);
bool looks_rational(const std::string& text);

std::string rational_to_string(const Rational& r);
// Lossless hex-float form ("0x1.9e37...p+0") via MPFR.
std::string bigfloat_to_hex(const BigFloat& x);
BigFloat bigfloat_from_hex(const std::string& text, unsigned bits);

// Canonical exact text of a scalar: "p/q" for rationals, hex-float otherwise.
std::string scalar_to_string(const Scalar& x);
// Inverse of scalar_to_string; also accepts plain decimals (as exact
// rationals in exact mode, converted in approx mode).
Scalar scalar_from_string(const std::string& text, const NumberPolicy& policy);

// --- algebraic parameters ---

// A real algebraic number given as (polynomial, isolating bracket with a sign
// change). Realized by bisection at the policy precision; no field arithmetic.
struct AlgebraicSpec {
    std::vector<Rational> minpoly; // ascending coefficients c0 + c1 t + ...
    Rational bracket_lo, bracket_hi;
};

Rational eval_poly(const std::vector<Rational>& coeffs, const Rational& x);
// Bisects to width < 2^-(bits+8); throws std::domain_error if the bracket has
// no sign change.
BigFloat realize_algebraic(const AlgebraicSpec& spec, unsigned bits);

// One map parameter as supplied: an exact rational or an algebraic spec.
struct ParamValue {
    std::variant<Rational, AlgebraicSpec> v;

    ParamValue() : v(Rational(0)) {}
    ParamValue(Rational r) : v(std::move(r)) {}
    ParamValue(AlgebraicSpec a) : v(std::move(a)) {}

    bool is_rational() const { return std::holds_alternative<Rational>(v); }
    const Rational& rat() const { return std::get<Rational>(v); }
    const AlgebraicSpec& alg() const { return std::get<AlgebraicSpec>(v); }

    // Realize under a policy: exact -> must be rational; approx -> BigFloat.
    Scalar realize(const NumberPolicy& policy) const;
};

} // namespace symdyn
