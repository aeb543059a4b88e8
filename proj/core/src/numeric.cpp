#include "symdyn/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace symdyn {

unsigned digits10_for_bits(unsigned bits) {
    // bits * log10(2), rounded up, plus guard digits so round trips are safe
    return unsigned(std::ceil(double(bits) * 0.30102999566398119521)) + 4;
}

ScopedPrecision::ScopedPrecision(unsigned bits)
    : saved_digits10_(BigFloat::default_precision()) {
    BigFloat::default_precision(digits10_for_bits(bits));
}

ScopedPrecision::~ScopedPrecision() {
    BigFloat::default_precision(saved_digits10_);
}

double Scalar::to_double() const {
    if (is_exact()) return rat().convert_to<double>();
    return big().convert_to<double>();
}

BigFloat Scalar::to_bigfloat() const {
    if (is_exact()) return BigFloat(rat());
    return big();
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rat() + b.rat()));
    return Scalar(BigFloat(a.to_bigfloat() + b.to_bigfloat()));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rat() - b.rat()));
    return Scalar(BigFloat(a.to_bigfloat() - b.to_bigfloat()));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.rat() * b.rat()));
    return Scalar(BigFloat(a.to_bigfloat() * b.to_bigfloat()));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) {
        if (b.rat() == 0) throw std::domain_error("division by zero");
        return Scalar(Rational(a.rat() / b.rat()));
    }
    return Scalar(BigFloat(a.to_bigfloat() / b.to_bigfloat()));
}

Scalar Scalar::operator-() const {
    if (is_exact()) return Scalar(Rational(-rat()));
    return Scalar(BigFloat(-big()));
}

int Scalar::cmp(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return a.rat().compare(b.rat());
    return a.to_bigfloat().compare(b.to_bigfloat());
}

Scalar abs(const Scalar& x) {
    return x < Scalar(0) ? -x : x;
}

long ceil_to_long(const Scalar& x) {
    if (x.is_exact()) {
        const auto& r = x.rat();
        boost::multiprecision::mpz_int num = boost::multiprecision::numerator(r);
        boost::multiprecision::mpz_int den = boost::multiprecision::denominator(r);
        boost::multiprecision::mpz_int q = num / den;
        if (q * den < num) q += 1; // denominators are positive in canonical form
        return q.convert_to<long>();
    }
    return boost::multiprecision::ceil(x.big()).convert_to<long>();
}

Scalar iv_width(const Interval& iv) { return iv.hi - iv.lo; }

bool iv_empty(const Interval& iv, const NumberPolicy& policy) {
    if (policy.is_exact()) return iv.hi <= iv.lo;
    return iv.hi - iv.lo <= Scalar(BigFloat(10.0 * policy.tolerance));
}

Interval iv_intersect(const Interval& a, const Interval& b) {
    Interval out;
    out.lo = a.lo < b.lo ? b.lo : a.lo;
    out.hi = a.hi < b.hi ? a.hi : b.hi;
    return out;
}

bool iv_same(const Interval& a, const Interval& b, const NumberPolicy& policy) {
    if (policy.is_exact()) return a.lo == b.lo && a.hi == b.hi;
    const Scalar tol(BigFloat(policy.tolerance));
    return abs(a.lo - b.lo) <= tol && abs(a.hi - b.hi) <= tol;
}

bool iv_contains_closed(const Interval& iv, const Scalar& x) {
    return iv.lo <= x && x <= iv.hi;
}

bool looks_rational(const std::string& text) {
    if (text.empty()) return false;
    for (char c : text) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '.' ||
              c == '-' || c == '+'))
            return false;
    }
    return true;
}

Rational parse_rational(const std::string& raw) {
    std::string text = raw;
    if (!text.empty() && text.front() == '+') text.erase(0, 1); // gmp rejects '+'
    if (text.empty()) throw std::domain_error("empty number literal");
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const Rational num(text.substr(0, slash));
        const Rational den(text.substr(slash + 1));
        if (den == 0) throw std::domain_error("zero denominator in '" + text + "'");
        return num / den;
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(text);
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_len = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::domain_error("bad number literal '" + text + "'");
    Rational scale = 1;
    for (std::size_t i = 0; i < frac_len; ++i) scale *= 10;
    return Rational(digits) / scale;
}

std::string rational_to_string(const Rational& r) {
    return r.str();
}

std::string bigfloat_to_hex(const BigFloat& x) {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", x.backend().data());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

BigFloat bigfloat_from_hex(const std::string& text, unsigned bits) {
    // Allocate enough precision to hold every hex digit of the literal, so a
    // serialize/parse round trip reproduces the value bit for bit.
    unsigned hex_digits = 0;
    const auto mark = text.find('x');
    for (std::size_t i = (mark == std::string::npos ? 0 : mark + 1); i < text.size(); ++i) {
        const char c = text[i];
        if (c == 'p' || c == 'P') break;
        if (std::isxdigit(static_cast<unsigned char>(c))) ++hex_digits;
    }
    const unsigned parse_bits = std::max(4 * hex_digits + 8, bits);
    ScopedPrecision prec(parse_bits);
    BigFloat x(0);
    mpfr_set_prec(x.backend().data(), mpfr_prec_t(parse_bits));
    if (mpfr_set_str(x.backend().data(), text.c_str(), 0, MPFR_RNDN) != 0)
        throw std::domain_error("bad hex-float literal '" + text + "'");
    return x;
}

std::string scalar_to_string(const Scalar& x) {
    if (x.is_exact()) return rational_to_string(x.rat());
    return bigfloat_to_hex(x.big());
}

Scalar scalar_from_string(const std::string& text, const NumberPolicy& policy) {
    const bool hex = text.find("0x") != std::string::npos || text.find("0X") != std::string::npos;
    if (hex) {
        if (policy.is_exact())
            throw std::domain_error("hex-float literal in exact mode: '" + text + "'");
        return Scalar(bigfloat_from_hex(text, policy.precision_bits));
    }
    const Rational r = parse_rational(text);
    if (policy.is_exact()) return Scalar(r);
    ScopedPrecision prec(policy.precision_bits);
    return Scalar(BigFloat(r));
}

Rational eval_poly(const std::vector<Rational>& coeffs, const Rational& x) {
    Rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

BigFloat realize_algebraic(const AlgebraicSpec& spec, unsigned bits) {
    if (spec.minpoly.size() < 2) throw std::domain_error("polynomial must have degree >= 1");
    Rational lo = spec.bracket_lo, hi = spec.bracket_hi;
    if (!(lo < hi)) throw std::domain_error("bracket must satisfy lo < hi");
    Rational flo = eval_poly(spec.minpoly, lo);
    Rational fhi = eval_poly(spec.minpoly, hi);
    if (flo == 0) return BigFloat(lo);
    if (fhi == 0) return BigFloat(hi);
    if ((flo < 0) == (fhi < 0))
        throw std::domain_error("bracket has no sign change for the given polynomial");

    // Bisect until the bracket is narrower than the target precision.
    Rational width = hi - lo;
    Rational target(1);
    for (unsigned i = 0; i < bits + 8; ++i) target /= 2;
    while (width > target) {
        const Rational mid = (lo + hi) / 2;
        const Rational fmid = eval_poly(spec.minpoly, mid);
        if (fmid == 0) return BigFloat(mid);
        if ((fmid < 0) == (flo < 0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        width = hi - lo;
    }
    ScopedPrecision prec(bits);
    return BigFloat((BigFloat(lo) + BigFloat(hi)) / 2);
}

Scalar ParamValue::realize(const NumberPolicy& policy) const {
    if (policy.is_exact()) {
        if (!is_rational())
            throw std::domain_error("algebraic parameter requires approx mode");
        return Scalar(rat());
    }
    ScopedPrecision prec(policy.precision_bits);
    if (is_rational()) return Scalar(BigFloat(rat()));
    return Scalar(realize_algebraic(alg(), policy.precision_bits));
}

} // namespace symdyn
