#pragma once

// The spectral measure δ ↦ E(δ) for both scalar-type models. On the
// diagonal model E(δ) filters coordinates whose eigenvalue lies in δ, so
// every axiom check is exact; on the finite model E(δ) = T·P·T⁻¹ sums the
// eigenprojections with eigenvalue in δ.

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "stso/finite_operator.hpp"
#include "stso/operators.hpp"
#include "stso/region.hpp"
#include "stso/vector.hpp"

namespace stso {

class Projection {
public:
    Projection(DiagonalOperator op, BorelRegion region)
        : backing_(DiagonalBacking{std::move(op), std::move(region)}) {}

    explicit Projection(Matrix m) : backing_(std::move(m)) {}

    FiniteVector apply(const FiniteVector& x) const {
        if (const auto* d = std::get_if<DiagonalBacking>(&backing_)) {
            FiniteVector out;
            for (const auto& [k, v] : x.coords())
                if (d->region.contains(d->op.eigenvalue(k))) out.set(k, v);
            return out;
        }
        const Matrix& m = std::get<Matrix>(backing_);
        DenseVector dense = DenseVector::Zero(m.rows());
        for (const auto& [k, v] : x.coords()) {
            if (k > m.rows()) throw ModelError("coordinate index exceeds dimension");
            dense(k - 1) = to_complex(v);
        }
        return FiniteDiagonalizableOperator::from_dense(m * dense);
    }

    // Diagonal model only: does the projection keep coordinate k?
    bool selects(const DiagonalOperator& a, long k) const {
        const auto* d = std::get_if<DiagonalBacking>(&backing_);
        if (!d) throw ModelError("index query on a dense projection");
        return d->region.contains(a.eigenvalue(k));
    }

    const Matrix* dense() const { return std::get_if<Matrix>(&backing_); }

private:
    struct DiagonalBacking {
        DiagonalOperator op;
        BorelRegion region;
    };
    std::variant<DiagonalBacking, Matrix> backing_;
};

inline Projection spectral_projection(const DiagonalOperator& a, const BorelRegion& delta) {
    return Projection(a, delta);
}

inline Projection spectral_projection(const FiniteDiagonalizableOperator& a,
                                      const BorelRegion& delta) {
    std::vector<bool> selected(a.dimension());
    for (int i = 0; i < a.dimension(); ++i) selected[i] = delta.contains(a.eigenvalues()[i]);
    return Projection(a.projection_matrix(selected));
}

struct MeasureAxiomReport {
    double multiplicativity = 0.0;        // ‖E(δ∩σ)x − E(δ)E(σ)x‖
    double projection_commutation = 0.0;  // ‖E(δ)E(σ)x − E(σ)E(δ)x‖
    double operator_commutation = 0.0;    // ‖A·E(δ)x − E(δ)·A·x‖
    double additivity = 0.0;              // ‖E(δ∪σ)x − E(δ)x − E(σ)x‖, disjoint case
    bool additivity_checked = false;
    double max_deviation() const {
        return std::max(std::max(multiplicativity, projection_commutation),
                        std::max(operator_commutation, additivity));
    }
};

inline MeasureAxiomReport verify_measure_axioms(const DiagonalOperator& a,
                                                const BorelRegion& delta,
                                                const BorelRegion& sigma,
                                                const std::vector<FiniteVector>& samples) {
    MeasureAxiomReport report;
    const Projection ed = spectral_projection(a, delta);
    const Projection es = spectral_projection(a, sigma);
    const Projection both = spectral_projection(a, region_intersection(delta, sigma));
    const Projection either = spectral_projection(a, region_union(delta, sigma));
    const double p = a.space_p();

    bool disjoint = true;
    for (const FiniteVector& x : samples)
        for (const auto& [k, v] : x.coords())
            if (both.selects(a, k)) disjoint = false;

    for (const FiniteVector& x : samples) {
        const FiniteVector edx = ed.apply(x);
        const FiniteVector esx = es.apply(x);
        report.multiplicativity =
            std::max(report.multiplicativity, vector_norm(both.apply(x) - ed.apply(esx), p));
        report.projection_commutation = std::max(
            report.projection_commutation, vector_norm(ed.apply(esx) - es.apply(edx), p));
        report.operator_commutation =
            std::max(report.operator_commutation,
                     vector_norm(apply_diagonal(a, edx) - ed.apply(apply_diagonal(a, x)), p));
        if (disjoint) {
            report.additivity =
                std::max(report.additivity, vector_norm(either.apply(x) - edx - esx, p));
            report.additivity_checked = true;
        }
    }
    return report;
}

inline MeasureAxiomReport verify_measure_axioms(const FiniteDiagonalizableOperator& a,
                                                const BorelRegion& delta,
                                                const BorelRegion& sigma,
                                                const std::vector<FiniteVector>& samples) {
    MeasureAxiomReport report;
    const Matrix ed = *spectral_projection(a, delta).dense();
    const Matrix es = *spectral_projection(a, sigma).dense();
    const Matrix both = *spectral_projection(a, region_intersection(delta, sigma)).dense();
    const Matrix either = *spectral_projection(a, region_union(delta, sigma)).dense();

    const BorelRegion overlap = region_intersection(delta, sigma);
    bool disjoint = true;
    for (const Complex& ev : a.eigenvalues())
        if (overlap.contains(ev)) disjoint = false;

    for (const FiniteVector& sample : samples) {
        const DenseVector x = a.to_dense(sample);
        report.multiplicativity =
            std::max(report.multiplicativity, (both * x - ed * (es * x)).norm());
        report.projection_commutation =
            std::max(report.projection_commutation, (ed * (es * x) - es * (ed * x)).norm());
        report.operator_commutation =
            std::max(report.operator_commutation,
                     (a.matrix() * (ed * x) - ed * (a.matrix() * x)).norm());
        if (disjoint) {
            report.additivity = std::max(report.additivity, (either * x - ed * x - es * x).norm());
            report.additivity_checked = true;
        }
    }
    return report;
}

struct MeasureBoundReport {
    int regions_sampled = 0;
    double max_observed = 0.0;
    std::optional<double> exact_bound;  // known bound M when the model admits one
    double envelope = 0.0;              // always-valid upper bound
};

// Coordinate projections on l_p have norm exactly 1 (or 0 for the empty
// selection), so the diagonal model realizes the uniform bound M = 1.
inline MeasureBoundReport measure_bound(const DiagonalOperator& a, int region_sample_count,
                                        std::uint64_t seed = 0) {
    if (region_sample_count < 1) throw ModelError("region sample count must be >= 1");
    MeasureBoundReport report;
    report.exact_bound = 1.0;
    report.envelope = 1.0;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> pick_index(1, 64);
    std::uniform_real_distribution<double> pick_radius(0.0, 2.0);
    for (int s = 0; s < region_sample_count; ++s) {
        BorelRegion delta = s == 0 ? BorelRegion::whole_plane()
                                   : BorelRegion::closed_disk(
                                         to_complex(a.eigenvalue(pick_index(rng))),
                                         pick_radius(rng));
        bool selects_any = false;
        for (long k = 1; k <= 64 && !selects_any; ++k)
            if (delta.contains(a.eigenvalue(k))) selects_any = true;
        report.max_observed = std::max(report.max_observed, selects_any ? 1.0 : 0.0);
        ++report.regions_sampled;
    }
    return report;
}

inline MeasureBoundReport measure_bound(const FiniteDiagonalizableOperator& a,
                                        int region_sample_count, std::uint64_t seed = 0) {
    if (region_sample_count < 1) throw ModelError("region sample count must be >= 1");
    MeasureBoundReport report;
    report.envelope = op_norm2(a.similarity()) * op_norm2(a.similarity_inverse());
    const int d = a.dimension();

    const auto observe = [&](unsigned long mask) {
        std::vector<bool> selected(d);
        for (int i = 0; i < d; ++i) selected[i] = (mask >> i) & 1u;
        report.max_observed =
            std::max(report.max_observed, op_norm2(a.projection_matrix(selected)));
        ++report.regions_sampled;
    };

    if (d <= 12) {
        for (unsigned long mask = 0; mask < (1ul << d); ++mask) observe(mask);
        report.exact_bound = report.max_observed;
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<unsigned long> pick_mask(0, (1ul << d) - 1);
        observe((1ul << d) - 1);
        for (int s = 1; s < region_sample_count; ++s) observe(pick_mask(rng));
    }
    return report;
}

}  // namespace stso
