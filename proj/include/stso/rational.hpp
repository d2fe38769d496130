#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "stso/errors.hpp"

namespace stso {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact conversion; every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ModelError("non-finite value where a number is required");
    return Rational(x);
}

inline double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

// Smallest integer n >= 0 with n*n >= r (r >= 0).
inline BigInt ceil_sqrt(const Rational& r) {
    if (r <= 0) return 0;
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    // ceil(num/den) first, then integer sqrt upward.
    BigInt q = num / den;
    if (q * den != num) ++q;
    BigInt s = boost::multiprecision::sqrt(q);
    if (s * s < q) ++s;
    return s;
}

// Exact square root when the rational is a perfect square of a rational.
inline bool exact_sqrt(const Rational& r, Rational& out) {
    if (r < 0) return false;
    if (r == 0) {
        out = 0;
        return true;
    }
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    const BigInt sn = boost::multiprecision::sqrt(num);
    const BigInt sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return false;
    out = Rational(sn, sd);
    return true;
}

// sqrt of a nonnegative rational as a double; exact whenever the value is a
// perfect rational square, correctly-rounded-ish otherwise.
inline double sqrt_to_double(const Rational& r) {
    Rational exact;
    if (exact_sqrt(r, exact)) return rational_to_double(exact);
    return std::sqrt(rational_to_double(r));
}

// Complex number with exact rational real and imaginary parts. The workhorse
// of every computation that claims a deviation of exactly zero.
struct RationalComplex {
    Rational re;
    Rational im;

    RationalComplex() = default;
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    explicit RationalComplex(long v) : re(v), im(0) {}

    static RationalComplex from_double(double r, double i) {
        return {rational_from_double(r), rational_from_double(i)};
    }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    RationalComplex conj() const { return {re, -im}; }
    Rational abs2() const { return re * re + im * im; }

    friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const RationalComplex& a, const RationalComplex& b) { return !(a == b); }

    friend RationalComplex operator+(const RationalComplex& a, const RationalComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend RationalComplex operator-(const RationalComplex& a, const RationalComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend RationalComplex operator-(const RationalComplex& a) { return {-a.re, -a.im}; }
    friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend RationalComplex operator*(const Rational& s, const RationalComplex& a) {
        return {s * a.re, s * a.im};
    }
    friend RationalComplex operator/(const RationalComplex& a, const RationalComplex& b) {
        const Rational d = b.abs2();
        if (d == 0) throw EvalError("division by zero");
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
};

// Evaluation cap; large enough for every eigenvalue family of interest,
// small enough that bignum powers stay cheap.
inline constexpr std::int64_t kMaxExponent = 64;

inline RationalComplex pow(const RationalComplex& base, std::int64_t k) {
    if (k < -kMaxExponent || k > kMaxExponent) throw EvalError("integer exponent out of range");
    if (k == 0) return RationalComplex(1);
    RationalComplex b = base;
    std::int64_t e = k;
    if (e < 0) {
        b = RationalComplex(1) / b;  // throws on zero base
        e = -e;
    }
    RationalComplex acc(1);
    while (e > 0) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

// Ordering for use as a map key (lexicographic; no analytic meaning).
struct RationalComplexLess {
    bool operator()(const RationalComplex& a, const RationalComplex& b) const {
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    }
};

}  // namespace stso
