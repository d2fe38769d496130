#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "stso/errors.hpp"
#include "stso/rational.hpp"

namespace stso {

using Complex = std::complex<double>;

inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline void require_finite(const Complex& z, const char* what) {
    if (!is_finite(z)) throw ModelError(std::string(what) + ": value is not finite");
}

inline RationalComplex to_rational(const Complex& z) {
    return RationalComplex::from_double(z.real(), z.imag());
}

inline Complex to_complex(const RationalComplex& z) {
    return {rational_to_double(z.re), rational_to_double(z.im)};
}

namespace detail {
inline std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    // Try shorter forms that still round-trip.
    for (int prec = 1; prec <= 16; ++prec) {
        char shorter[32];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, x);
        if (std::strtod(shorter, nullptr) == x) return shorter;
    }
    return buf;
}
}  // namespace detail

// Compact "a+bi" rendering: "0", "2", "-1.5i", "1+2i", "1-2i".
inline std::string format_complex(const Complex& z) {
    const double re = z.real(), im = z.imag();
    if (im == 0.0) return detail::format_real(re);
    if (re == 0.0) return detail::format_real(im) + "i";
    std::string out = detail::format_real(re);
    if (im > 0 || std::isnan(im)) out += "+";
    out += detail::format_real(im) + "i";
    return out;
}

// Parses "a", "bi", "a+bi", "a-bi" with optional leading sign; used for
// CLI --lambda arguments. Not the expression grammar.
inline Complex parse_complex(const std::string& text) {
    const char* s = text.c_str();
    char* end = nullptr;
    auto bad = [&]() -> Complex {
        throw ParseError("malformed complex literal '" + text + "'", 0, {"a", "bi", "a+bi"});
    };
    // Special-case bare "i", "-i", "+i".
    std::string t = text;
    if (t == "i") return {0, 1};
    if (t == "-i") return {0, -1};
    if (t == "+i") return {0, 1};

    double first = std::strtod(s, &end);
    if (end == s) return bad();
    if (*end == '\0') return {first, 0};
    if (*end == 'i' && *(end + 1) == '\0') return {0, first};
    if (*end != '+' && *end != '-') return bad();
    const char* s2 = end;
    double second;
    if ((*s2 == '+' && *(s2 + 1) == 'i' && *(s2 + 2) == '\0')) {
        second = 1;
    } else if ((*s2 == '-' && *(s2 + 1) == 'i' && *(s2 + 2) == '\0')) {
        second = -1;
    } else {
        second = std::strtod(s2, &end);
        if (end == s2 || *end != 'i' || *(end + 1) != '\0') return bad();
    }
    return {first, second};
}

}  // namespace stso
