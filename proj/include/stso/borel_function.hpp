#pragma once

// Borel-measurable functions on the complex plane, in the closed form the
// calculus needs: identity, constants, integer powers, the cutoff reciprocal,
// region indicators, products, sums, and truncations F_n = F on {|F| <= n},
// 0 elsewhere. Every form is total on the plane; the cutoff reciprocal is 0
// inside its cutoff disk by definition. Evaluation is exact over the complex
// rationals.

#include <cstdint>
#include <memory>
#include <sstream>
#include <string>

#include "stso/complex.hpp"
#include "stso/errors.hpp"
#include "stso/rational.hpp"
#include "stso/region.hpp"

namespace stso {

enum class BorelFunctionKind {
    Identity,
    Constant,
    Power,
    CutoffReciprocal,
    Indicator,
    Product,
    Sum,
    Truncated
};

class BorelFunction {
public:
    BorelFunction() : BorelFunction(identity()) {}

    static BorelFunction identity() { return BorelFunction(make(BorelFunctionKind::Identity)); }

    static BorelFunction constant(const RationalComplex& c) {
        auto n = make(BorelFunctionKind::Constant);
        n->value = c;
        return BorelFunction(n);
    }
    static BorelFunction constant(const Complex& c) { return constant(to_rational(c)); }

    static BorelFunction power(std::int64_t k) {
        if (k < 0 || k > kMaxExponent) throw EvalError("power exponent out of range");
        auto n = make(BorelFunctionKind::Power);
        n->exponent = k;
        return BorelFunction(n);
    }

    // The proof function for the gap at 0: F(λ) = 1/λ when |λ| >= γ, else 0.
    static BorelFunction cutoff_reciprocal(const Rational& gamma) {
        if (gamma <= 0) throw EvalError("cutoff radius must be positive");
        auto n = make(BorelFunctionKind::CutoffReciprocal);
        n->threshold2 = gamma * gamma;
        return BorelFunction(n);
    }
    static BorelFunction cutoff_reciprocal(double gamma) {
        return cutoff_reciprocal(rational_from_double(gamma));
    }

    // Same function specified through γ²; keeps the cutoff exact when γ
    // itself is irrational.
    static BorelFunction cutoff_reciprocal_squared(const Rational& gamma2) {
        if (gamma2 <= 0) throw EvalError("cutoff radius must be positive");
        auto n = make(BorelFunctionKind::CutoffReciprocal);
        n->threshold2 = gamma2;
        return BorelFunction(n);
    }

    static BorelFunction indicator(BorelRegion region) {
        auto n = make(BorelFunctionKind::Indicator);
        n->region = std::move(region);
        return BorelFunction(n);
    }

    friend BorelFunction operator*(const BorelFunction& a, const BorelFunction& b) {
        auto n = make(BorelFunctionKind::Product);
        n->lhs = a.node_;
        n->rhs = b.node_;
        return BorelFunction(n);
    }
    friend BorelFunction operator+(const BorelFunction& a, const BorelFunction& b) {
        auto n = make(BorelFunctionKind::Sum);
        n->lhs = a.node_;
        n->rhs = b.node_;
        return BorelFunction(n);
    }

    friend BorelFunction truncate_function(const BorelFunction& f, long n) {
        if (n < 1) throw EvalError("truncation level must be >= 1");
        auto node = make(BorelFunctionKind::Truncated);
        node->lhs = f.node_;
        node->level = n;
        return BorelFunction(node);
    }

    RationalComplex eval(const RationalComplex& z) const { return eval(node_.get(), z); }
    Complex eval(const Complex& z) const { return to_complex(eval(to_rational(z))); }

    BorelFunctionKind kind() const { return node_->kind; }

    std::string describe() const {
        std::ostringstream os;
        describe(node_.get(), os);
        return os.str();
    }

private:
    struct Node {
        BorelFunctionKind kind;
        RationalComplex value;    // Constant
        std::int64_t exponent = 0;  // Power
        Rational threshold2;      // CutoffReciprocal, squared cutoff radius
        long level = 0;           // Truncated
        BorelRegion region;       // Indicator
        std::shared_ptr<const Node> lhs, rhs;
    };

    explicit BorelFunction(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::shared_ptr<Node> make(BorelFunctionKind k) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        return n;
    }

    static RationalComplex eval(const Node* n, const RationalComplex& z) {
        switch (n->kind) {
            case BorelFunctionKind::Identity: return z;
            case BorelFunctionKind::Constant: return n->value;
            case BorelFunctionKind::Power: return pow(z, n->exponent);
            case BorelFunctionKind::CutoffReciprocal:
                if (z.abs2() < n->threshold2) return RationalComplex();
                return RationalComplex(1) / z;
            case BorelFunctionKind::Indicator:
                return n->region.contains(z) ? RationalComplex(1) : RationalComplex();
            case BorelFunctionKind::Product: return eval(n->lhs.get(), z) * eval(n->rhs.get(), z);
            case BorelFunctionKind::Sum: return eval(n->lhs.get(), z) + eval(n->rhs.get(), z);
            case BorelFunctionKind::Truncated: {
                const RationalComplex v = eval(n->lhs.get(), z);
                const Rational bound = Rational(n->level) * Rational(n->level);
                return v.abs2() <= bound ? v : RationalComplex();
            }
        }
        return {};
    }

    static void describe(const Node* n, std::ostream& os) {
        switch (n->kind) {
            case BorelFunctionKind::Identity: os << "identity"; return;
            case BorelFunctionKind::Constant:
                os << "constant(" << format_complex(to_complex(n->value)) << ")";
                return;
            case BorelFunctionKind::Power: os << "power(" << n->exponent << ")"; return;
            case BorelFunctionKind::CutoffReciprocal:
                os << "reciprocal-with-cutoff(" << detail::format_real(sqrt_to_double(n->threshold2))
                   << ")";
                return;
            case BorelFunctionKind::Indicator:
                os << "indicator(" << n->region.describe() << ")";
                return;
            case BorelFunctionKind::Product:
                os << "product(";
                describe(n->lhs.get(), os);
                os << ", ";
                describe(n->rhs.get(), os);
                os << ")";
                return;
            case BorelFunctionKind::Sum:
                os << "sum(";
                describe(n->lhs.get(), os);
                os << ", ";
                describe(n->rhs.get(), os);
                os << ")";
                return;
            case BorelFunctionKind::Truncated:
                os << "truncate(";
                describe(n->lhs.get(), os);
                os << ", " << n->level << ")";
                return;
        }
    }

    std::shared_ptr<const Node> node_;
};

inline Complex eval_borel_function(const BorelFunction& f, const Complex& z) {
    return f.eval(z);
}

}  // namespace stso
