#pragma once

// Seeded generators for sample vectors, scalars, and probe points. All
// randomness in the toolkit flows through an explicit std::mt19937_64 so
// that identical seeds reproduce identical runs; bounded draws use modular
// reduction rather than std distributions, whose outputs are not pinned by
// the standard.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "stso/complex.hpp"
#include "stso/rational.hpp"
#include "stso/vector.hpp"

namespace stso {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform-ish draw from [0, n); n must be positive.
inline long draw_below(Rng& g, long n) { return static_cast<long>(g() % static_cast<std::uint64_t>(n)); }

inline long draw_range(Rng& g, long lo, long hi) { return lo + draw_below(g, hi - lo + 1); }

inline Rational random_rational(Rng& g, long lo = -8, long hi = 8, long max_den = 4) {
    return Rational(draw_range(g, lo, hi), draw_range(g, 1, max_den));
}

inline RationalComplex random_rational_complex(Rng& g, long lo = -8, long hi = 8,
                                               long max_den = 4) {
    return RationalComplex(random_rational(g, lo, hi, max_den),
                           random_rational(g, lo, hi, max_den));
}

inline Complex random_box_complex(Rng& g, double half_width = 3.0) {
    const auto coord = [&] {
        return (static_cast<double>(g() >> 11) / 9007199254740992.0 * 2.0 - 1.0) * half_width;
    };
    const double re = coord();
    const double im = coord();
    return Complex(re, im);
}

// Finitely supported vector with exact rational coordinates; never the zero
// vector.
inline FiniteVector random_vector(Rng& g, long max_index, int max_support) {
    if (max_index < 1) throw std::invalid_argument("random_vector: max_index must be >= 1");
    const int cap = static_cast<int>(std::min<long>(max_support, max_index));
    FiniteVector v;
    while (v.coords().empty()) {
        const int support = static_cast<int>(draw_range(g, 1, cap));
        std::set<long> indices;
        while (static_cast<int>(indices.size()) < support)
            indices.insert(draw_range(g, 1, max_index));
        for (long k : indices) v.set(k, random_rational_complex(g));
    }
    return v;
}

inline std::vector<FiniteVector> random_vectors(Rng& g, int count, long max_index,
                                                int max_support) {
    std::vector<FiniteVector> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(random_vector(g, max_index, max_support));
    return out;
}

}  // namespace stso
