#pragma once

// Finitely supported coordinate vectors with exact rational components.
// Indices are 1-based; only nonzero entries are stored.

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "stso/complex.hpp"
#include "stso/rational.hpp"

namespace stso {

class FiniteVector {
public:
    using Coords = std::map<long, RationalComplex>;

    FiniteVector() = default;

    static FiniteVector unit(long k) {
        FiniteVector v;
        v.set(k, RationalComplex(1));
        return v;
    }

    void set(long k, RationalComplex value) {
        if (k < 1) throw std::invalid_argument("coordinate index must be >= 1");
        if (value.is_zero())
            coords_.erase(k);
        else
            coords_[k] = std::move(value);
    }

    void set(long k, const Complex& value) { set(k, to_rational(value)); }

    RationalComplex at(long k) const {
        auto it = coords_.find(k);
        return it == coords_.end() ? RationalComplex() : it->second;
    }

    bool is_zero() const { return coords_.empty(); }
    std::size_t support_size() const { return coords_.size(); }
    long max_index() const { return coords_.empty() ? 0 : coords_.rbegin()->first; }
    const Coords& coords() const { return coords_; }

    FiniteVector& operator+=(const FiniteVector& other) {
        for (const auto& [k, v] : other.coords_) set(k, at(k) + v);
        return *this;
    }
    FiniteVector& operator-=(const FiniteVector& other) {
        for (const auto& [k, v] : other.coords_) set(k, at(k) - v);
        return *this;
    }
    FiniteVector& operator*=(const RationalComplex& s) {
        if (s.is_zero()) {
            coords_.clear();
            return *this;
        }
        for (auto& [k, v] : coords_) v = v * s;
        return *this;
    }

    friend FiniteVector operator+(FiniteVector a, const FiniteVector& b) { return a += b; }
    friend FiniteVector operator-(FiniteVector a, const FiniteVector& b) { return a -= b; }
    friend FiniteVector operator*(const RationalComplex& s, FiniteVector v) { return v *= s; }

    bool operator==(const FiniteVector& other) const { return coords_ == other.coords_; }
    bool operator!=(const FiniteVector& other) const { return !(*this == other); }

private:
    Coords coords_;
};

// Exact inner product, conjugate-linear in the second argument.
inline RationalComplex inner(const FiniteVector& x, const FiniteVector& y) {
    RationalComplex acc;
    for (const auto& [k, c] : x.coords()) acc = acc + c * y.at(k).conj();
    return acc;
}

// Exact squared Euclidean norm.
inline Rational norm_squared(const FiniteVector& v) {
    Rational acc = 0;
    for (const auto& [k, c] : v.coords()) acc += c.abs2();
    return acc;
}

// l_p norm for 1 <= p <= infinity. Exact for p = 2 when the squared norm is a
// perfect square; otherwise correctly computed in double precision.
inline double vector_norm(const FiniteVector& v, double p = 2.0) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
    if (std::isinf(p)) {
        double best = 0.0;
        for (const auto& [k, c] : v.coords())
            best = std::max(best, std::sqrt(rational_to_double(c.abs2())));
        return best;
    }
    if (p == 2.0) return sqrt_to_double(norm_squared(v));
    double acc = 0.0;
    for (const auto& [k, c] : v.coords())
        acc += std::pow(rational_to_double(c.abs2()), p / 2.0);
    return std::pow(acc, 1.0 / p);
}

}  // namespace stso
