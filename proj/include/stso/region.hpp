#pragma once

// Borel subsets of the complex plane, built from disk, point, and half-plane
// primitives closed under union, intersection, and complement. Membership is
// decided exactly in rational arithmetic; all squared-modulus comparisons
// avoid floating-point rounding.

#include <memory>
#include <sstream>
#include <string>

#include "stso/complex.hpp"
#include "stso/rational.hpp"

namespace stso {

enum class RegionKind {
    Empty,
    WholePlane,
    Singleton,
    ClosedDisk,
    OpenDisk,
    HalfPlane,
    Union,
    Intersection,
    Complement
};

class BorelRegion {
public:
    BorelRegion() : BorelRegion(make(RegionKind::Empty)) {}

    static BorelRegion empty() { return BorelRegion(make(RegionKind::Empty)); }
    static BorelRegion whole_plane() { return BorelRegion(make(RegionKind::WholePlane)); }

    static BorelRegion singleton(const RationalComplex& c) {
        auto n = make(RegionKind::Singleton);
        n->center = c;
        return BorelRegion(n);
    }
    static BorelRegion singleton(const Complex& c) { return singleton(to_rational(c)); }

    static BorelRegion closed_disk(const RationalComplex& c, const Rational& radius) {
        return disk(RegionKind::ClosedDisk, c, radius);
    }
    static BorelRegion closed_disk(const Complex& c, double radius) {
        return disk(RegionKind::ClosedDisk, to_rational(c), rational_from_double(radius));
    }
    static BorelRegion open_disk(const RationalComplex& c, const Rational& radius) {
        return disk(RegionKind::OpenDisk, c, radius);
    }
    static BorelRegion open_disk(const Complex& c, double radius) {
        return disk(RegionKind::OpenDisk, to_rational(c), rational_from_double(radius));
    }

    // Closed half-plane { λ : Re(conj(normal)·λ) >= offset }.
    static BorelRegion half_plane(const RationalComplex& normal, const Rational& offset) {
        auto n = make(RegionKind::HalfPlane);
        n->center = normal;
        n->offset = offset;
        return BorelRegion(n);
    }
    static BorelRegion half_plane(const Complex& normal, double offset) {
        return half_plane(to_rational(normal), rational_from_double(offset));
    }

    friend BorelRegion region_union(const BorelRegion& a, const BorelRegion& b) {
        auto n = make(RegionKind::Union);
        n->lhs = a.node_;
        n->rhs = b.node_;
        return BorelRegion(n);
    }
    friend BorelRegion region_intersection(const BorelRegion& a, const BorelRegion& b) {
        auto n = make(RegionKind::Intersection);
        n->lhs = a.node_;
        n->rhs = b.node_;
        return BorelRegion(n);
    }
    friend BorelRegion region_complement(const BorelRegion& a) {
        auto n = make(RegionKind::Complement);
        n->lhs = a.node_;
        return BorelRegion(n);
    }

    bool contains(const RationalComplex& z) const { return contains(node_.get(), z); }
    bool contains(const Complex& z) const { return contains(to_rational(z)); }

    RegionKind kind() const { return node_->kind; }

    std::string describe() const {
        std::ostringstream os;
        describe(node_.get(), os);
        return os.str();
    }

private:
    struct Node {
        RegionKind kind;
        RationalComplex center;  // disk center, singleton point, half-plane normal
        Rational radius2;        // squared radius
        Rational offset;
        std::shared_ptr<const Node> lhs, rhs;
    };

    explicit BorelRegion(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::shared_ptr<Node> make(RegionKind k) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        return n;
    }

    static BorelRegion disk(RegionKind kind, const RationalComplex& c, const Rational& radius) {
        auto n = make(kind);
        n->center = c;
        n->radius2 = radius * radius;
        return BorelRegion(n);
    }

    static bool contains(const Node* n, const RationalComplex& z) {
        switch (n->kind) {
            case RegionKind::Empty: return false;
            case RegionKind::WholePlane: return true;
            case RegionKind::Singleton: return z == n->center;
            case RegionKind::ClosedDisk: return (z - n->center).abs2() <= n->radius2;
            case RegionKind::OpenDisk: return (z - n->center).abs2() < n->radius2;
            case RegionKind::HalfPlane: {
                const Rational dot = n->center.re * z.re + n->center.im * z.im;
                return dot >= n->offset;
            }
            case RegionKind::Union: return contains(n->lhs.get(), z) || contains(n->rhs.get(), z);
            case RegionKind::Intersection:
                return contains(n->lhs.get(), z) && contains(n->rhs.get(), z);
            case RegionKind::Complement: return !contains(n->lhs.get(), z);
        }
        return false;
    }

    static void describe_point(const RationalComplex& c, std::ostream& os) {
        os << format_complex(to_complex(c));
    }

    static void describe(const Node* n, std::ostream& os) {
        switch (n->kind) {
            case RegionKind::Empty: os << "empty"; return;
            case RegionKind::WholePlane: os << "plane"; return;
            case RegionKind::Singleton:
                os << "point(";
                describe_point(n->center, os);
                os << ")";
                return;
            case RegionKind::ClosedDisk:
            case RegionKind::OpenDisk:
                os << (n->kind == RegionKind::ClosedDisk ? "disk(" : "open-disk(");
                describe_point(n->center, os);
                os << ", r=" << detail::format_real(sqrt_to_double(n->radius2)) << ")";
                return;
            case RegionKind::HalfPlane:
                os << "halfplane(normal=";
                describe_point(n->center, os);
                os << ", offset=" << detail::format_real(rational_to_double(n->offset)) << ")";
                return;
            case RegionKind::Union:
                os << "union(";
                describe(n->lhs.get(), os);
                os << ", ";
                describe(n->rhs.get(), os);
                os << ")";
                return;
            case RegionKind::Intersection:
                os << "inter(";
                describe(n->lhs.get(), os);
                os << ", ";
                describe(n->rhs.get(), os);
                os << ")";
                return;
            case RegionKind::Complement:
                os << "not(";
                describe(n->lhs.get(), os);
                os << ")";
                return;
        }
    }

    std::shared_ptr<const Node> node_;
};

inline bool region_contains(const BorelRegion& r, const Complex& z) { return r.contains(z); }
inline bool region_contains(const BorelRegion& r, const RationalComplex& z) {
    return r.contains(z);
}

}  // namespace stso
