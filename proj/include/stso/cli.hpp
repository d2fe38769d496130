#pragma once

// Command-line front end. One subcommand per invocation, one JSON report on
// stdout, exit codes: 0 pass, 1 fail, 2 inconclusive, 64 usage error, 65
// spec parse error.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "stso/calculus.hpp"
#include "stso/errors.hpp"
#include "stso/gap.hpp"
#include "stso/measure.hpp"
#include "stso/opspec.hpp"
#include "stso/report.hpp"
#include "stso/sampling.hpp"
#include "stso/spectrum.hpp"

namespace stso {

struct CliOptions {
    bool no_timestamp = false;
    std::optional<double> tolerance;
    std::optional<double> p_override;
    std::uint64_t seed = 0;
    long truncation = 1000;
    int samples = 100;
};

namespace detail {

// Deviation tolerance: exact-zero on the all-rational diagonal model,
// 1e-10 on numerically eigendecomposed finite models.
inline double model_tolerance(const LoadedOperator& op, const CliOptions& opt) {
    if (opt.tolerance) return *opt.tolerance;
    return std::holds_alternative<DiagonalOperator>(op.model) ? 0.0 : 1e-10;
}

template <typename DiagFn, typename FinFn>
auto with_scalar_model(const OperatorModel& m, const char* what, DiagFn&& diag, FinFn&& fin) {
    if (const auto* d = std::get_if<DiagonalOperator>(&m)) return diag(*d);
    if (const auto* f = std::get_if<FiniteDiagonalizableOperator>(&m)) return fin(*f);
    throw PreconditionError(std::string(what) +
                            " requires a scalar-type model (diagonal or finite)");
}

inline nlohmann::json finite_or_unbounded(double v) {
    if (std::isfinite(v)) return v;
    return "unbounded";
}

inline FiniteVector parse_vector_arg(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("--vector: ") + e.what(),
                         static_cast<std::size_t>(e.byte), {"JSON array"});
    }
    try {
        return parse_vector_json(j);
    } catch (const SpecParseError& e) {
        throw ParseError(std::string("--vector: ") + e.what(), 0, {"JSON array"});
    }
}

inline void describe_atoms(nlohmann::json& entry, const SpectrumDescription& desc) {
    entry["atom_count"] = desc.atoms.size();
    nlohmann::json atoms = nlohmann::json::array();
    const std::size_t shown = std::min<std::size_t>(desc.atoms.size(), 32);
    for (std::size_t i = 0; i < shown; ++i) {
        nlohmann::json a;
        a["first_index"] = desc.atoms[i].indices.empty() ? 0 : desc.atoms[i].indices.front();
        a["multiplicity_at_truncation"] = desc.atoms[i].indices.size();
        a["value"] = complex_to_json(to_complex(desc.atoms[i].value));
        atoms.push_back(std::move(a));
    }
    entry["atoms"] = std::move(atoms);
    if (shown < desc.atoms.size()) entry["atoms_truncated_to"] = shown;
    nlohmann::json limits = nlohmann::json::array();
    for (const auto& lp : desc.limit_points) limits.push_back(complex_to_json(to_complex(lp)));
    entry["limit_points"] = std::move(limits);
    entry["scalar_type"] = desc.is_scalar_type;
    if (!desc.note.empty()) entry["note"] = desc.note;
}

// --- subcommands ------------------------------------------------------------

inline int cmd_classify(const LoadedOperator& op, const std::vector<Complex>& lambdas,
                        const CliOptions& opt, std::ostream& out) {
    RunReport rep("classify", !opt.no_timestamp);
    rep.attach_spec(op.model_name, op.source);
    for (const Complex& lambda : lambdas) {
        try {
            const PointClassification c = std::visit(
                [&](const auto& m) { return classify_point(m, lambda, opt.truncation); },
                op.model);
            auto& e = rep.add_check("classify", CheckStatus::Pass);
            e["lambda"] = complex_to_json(lambda);
            e["verdict"] = to_string(c.verdict);
            if (!c.witness.empty()) e["witness"] = c.witness;
            if (c.inverse_norm_bound) e["inverse_norm_bound"] = *c.inverse_norm_bound;
        } catch (const InconclusiveError& ex) {
            auto& e = rep.add_check("classify", CheckStatus::Inconclusive);
            e["lambda"] = complex_to_json(lambda);
            e["error"] = ex.what();
        }
    }
    return rep.emit(out);
}

inline int cmd_spectrum(const LoadedOperator& op, const CliOptions& opt, std::ostream& out) {
    RunReport rep("spectrum", !opt.no_timestamp);
    rep.attach_spec(op.model_name, op.source);
    const SpectrumDescription desc = std::visit(
        [&](const auto& m) { return compute_spectrum(m, opt.truncation); }, op.model);
    auto& e = rep.add_check("spectrum", CheckStatus::Pass);
    describe_atoms(e, desc);
    e["truncation"] = desc.truncation;
    if (desc.is_scalar_type) e["point_spectrum_countable"] = true;
    return rep.emit(out);
}

inline int cmd_decompose(const LoadedOperator& op, const CliOptions& opt, std::ostream& out) {
    RunReport rep("decompose", !opt.no_timestamp);
    rep.attach_spec(op.model_name, op.source);
    const double tol = model_tolerance(op, opt);
    try {
        Rng rng = make_rng(opt.seed);
        const DecompositionReport d = with_scalar_model(
            op.model, "decompose",
            [&](const DiagonalOperator& a) {
                return decompose(a, random_vectors(rng, opt.samples, 48, 6));
            },
            [&](const FiniteDiagonalizableOperator& a) {
                return decompose(a, random_vectors(rng, opt.samples, a.dimension(),
                                                   std::min(a.dimension(), 6)));
            });
        auto& e = rep.add_check("decomposition",
                                d.max_deviation() <= tol ? CheckStatus::Pass : CheckStatus::Fail);
        e["annihilation"] = d.annihilation;
        e["complementarity"] = d.complementarity;
        e["idempotency"] = d.idempotency;
        e["reconstruction"] = d.reconstruction;
        e["samples"] = opt.samples;
        e["tolerance"] = tol;
    } catch (const InconclusiveError& ex) {
        rep.add_error("decomposition", ex.what(), CheckStatus::Inconclusive);
    } catch (const Error& ex) {
        rep.add_error("decomposition", ex.what(), CheckStatus::Fail);
    }
    return rep.emit(out);
}

inline void fill_gap_entry(nlohmann::json& e, const GapReport& g) {
    e["zero_in_spectrum"] = g.zero_in_spectrum;
    if (g.isolated) e["isolated"] = *g.isolated;
    if (g.gap_radius) e["gap_radius"] = finite_or_unbounded(*g.gap_radius);
    if (g.range_closed) e["range_closed"] = *g.range_closed;
    if (g.inf_nonzero_modulus) e["inf_nonzero_modulus"] = *g.inf_nonzero_modulus;
    e["predicates_agree"] = g.predicates_agree;
    if (g.proof_identity_deviation) e["proof_identity_deviation"] = *g.proof_identity_deviation;
    if (g.restriction_inverse_norm)
        e["restriction_inverse_norm"] = finite_or_unbounded(*g.restriction_inverse_norm);
    if (!g.notes.empty()) e["note"] = g.notes;
}

inline int cmd_gap(const LoadedOperator& op, const CliOptions& opt, std::ostream& out) {
    RunReport rep("gap", !opt.no_timestamp);
    rep.attach_spec(op.model_name, op.source);
    const double tol = model_tolerance(op, opt);
    try {
        const GapReport g = with_scalar_model(
            op.model, "gap analysis",
            [&](const DiagonalOperator& a) { return gap_theorem_check(a, opt.truncation); },
            [&](const FiniteDiagonalizableOperator& a) { return gap_theorem_check(a); });
        const bool proof_ok = !g.proof_identity_deviation || *g.proof_identity_deviation <= tol;
        auto& e = rep.add_check(
            "gap_equivalence",
            g.predicates_agree && proof_ok ? CheckStatus::Pass : CheckStatus::Fail);
        fill_gap_entry(e, g);
        e["tolerance"] = tol;

        if (const auto* d = std::get_if<DiagonalOperator>(&op.model)) {
            try {
                const RestrictionSpectrumResult rs =
                    restriction_spectrum_check(*d, opt.truncation);
                auto& r = rep.add_check(
                    "restriction_spectrum",
                    rs.union_holds ? CheckStatus::Pass : CheckStatus::Fail);
                r["a1_inverse_norm"] = rs.a1_inverse_norm
                                           ? nlohmann::json(*rs.a1_inverse_norm)
                                           : nlohmann::json("unbounded");
                r["union_holds"] = rs.union_holds;
            } catch (const PreconditionError&) {
                // 0 is not an eigenvalue; the restriction split does not apply
            }
        }
    } catch (const InconclusiveError& ex) {
        rep.add_error("gap_equivalence", ex.what(), CheckStatus::Inconclusive);
    } catch (const Error& ex) {
        rep.add_error("gap_equivalence", ex.what(), CheckStatus::Fail);
    }
    return rep.emit(out);
}

inline int cmd_reduce(const LoadedOperator& op, const FiniteVector& x, const CliOptions& opt,
                      std::ostream& out) {
    RunReport rep("reduce", !opt.no_timestamp);
    rep.attach_spec(op.model_name, op.source);
    const double tol = model_tolerance(op, opt);
    try {
        const ReducibleInverseReport r = with_scalar_model(
            op.model, "reducible inverse",
            [&](const DiagonalOperator& a) { return reducible_inverse(a, x, opt.truncation); },
            [&](const FiniteDiagonalizableOperator& a) { return reducible_inverse(a, x); });
        const double p = std::holds_alternative<DiagonalOperator>(op.model)
                             ? std::get<DiagonalOperator>(op.model).space_p()
                             : 2.0;
        bool norm_ok = true;
        double ratio = 0.0;
        if (!x.coords().empty()) {
            const double nx = vector_norm(x, p);
            const double ny = vector_norm(r.inverse, p);
            ratio = ny / nx;
            norm_ok = ny <= r.norm_bound * nx * (1.0 + 1e-9) + 1e-12;
        }
        auto& e = rep.add_check(
            "reducible_inverse",
            r.residual <= tol && norm_ok ? CheckStatus::Pass : CheckStatus::Fail);
        e["inverse"] = vector_to_json(r.inverse);
        e["norm_bound"] = r.norm_bound;
        e["norm_ratio"] = ratio;
        if (!r.note.empty()) e["note"] = r.note;
        e["residual"] = r.residual;
        e["tolerance"] = tol;
    } catch (const InconclusiveError& ex) {
        rep.add_error("reducible_inverse", ex.what(), CheckStatus::Inconclusive);
    } catch (const Error& ex) {
        rep.add_error("reducible_inverse", ex.what(), CheckStatus::Fail);
    }
    return rep.emit(out);
}

inline int cmd_calculus(const LoadedOperator& op, const std::string& function_text,
                        const FiniteVector& x, const CliOptions& opt, std::ostream& out) {
    RunReport rep("calculus", !opt.no_timestamp);
    rep.attach_spec(op.model_name, op.source);
    const BorelFunction f = parse_function_descriptor(function_text);
    try {
        const CalculusResult r = with_scalar_model(
            op.model, "operational calculus",
            [&](const DiagonalOperator& a) { return apply_function(a, f, x); },
            [&](const FiniteDiagonalizableOperator& a) { return apply_function(a, f, x); });
        const long level = std::max(r.converged_at, 1L);
        const FiniteVector truncated = with_scalar_model(
            op.model, "operational calculus",
            [&](const DiagonalOperator& a) { return apply_truncated(a, f, level, x); },
            [&](const FiniteDiagonalizableOperator& a) {
                return apply_truncated(a, f, level, x);
            });
        const double consistency = vector_norm(truncated - r.value);
        auto& e = rep.add_check(
            "calculus", consistency <= model_tolerance(op, opt) ? CheckStatus::Pass
                                                                : CheckStatus::Fail);
        e["converged_at"] = r.converged_at;
        e["domain"] = to_string(r.domain_verdict);
        e["function"] = function_text;
        e["truncation_consistency"] = consistency;
        e["value"] = vector_to_json(r.value);
    } catch (const InconclusiveError& ex) {
        rep.add_error("calculus", ex.what(), CheckStatus::Inconclusive);
    } catch (const Error& ex) {
        rep.add_error("calculus", ex.what(), CheckStatus::Fail);
    }
    return rep.emit(out);
}

// --- the verify battery -----------------------------------------------------

inline nlohmann::json& battery_check(RunReport& rep, const std::string& spec,
                                     const std::string& name, CheckStatus status) {
    auto& e = rep.add_check(name, status);
    e["spec"] = spec;
    return e;
}

template <typename Fn>
void guarded(RunReport& rep, const std::string& spec, const std::string& name, Fn&& fn) {
    try {
        fn();
    } catch (const InconclusiveError& ex) {
        battery_check(rep, spec, name, CheckStatus::Inconclusive)["error"] = ex.what();
    } catch (const Error& ex) {
        battery_check(rep, spec, name, CheckStatus::Fail)["error"] = ex.what();
    }
}

template <typename OperatorT>
void battery_measure(const OperatorT& a, long max_index, const std::string& spec,
                     RunReport& rep, const CliOptions& opt, double tol) {
    guarded(rep, spec, "measure_axioms", [&] {
        Rng rng = make_rng(opt.seed);
        const SpectrumDescription desc = compute_spectrum(a, 256);
        BorelRegion delta = desc.atoms.empty()
                                ? BorelRegion::closed_disk(Complex(0, 0), 1.0)
                                : BorelRegion::singleton(desc.atoms.front().value);
        BorelRegion sigma = desc.atoms.size() > 1
                                ? BorelRegion::singleton(desc.atoms[1].value)
                                : region_complement(delta);
        const auto samples = random_vectors(rng, 20, max_index, 6);
        const MeasureAxiomReport r = verify_measure_axioms(a, delta, sigma, samples);
        auto& e = battery_check(rep, spec, "measure_axioms",
                                r.max_deviation() <= tol ? CheckStatus::Pass
                                                         : CheckStatus::Fail);
        e["additivity"] = r.additivity;
        e["additivity_checked"] = r.additivity_checked;
        e["multiplicativity"] = r.multiplicativity;
        e["operator_commutation"] = r.operator_commutation;
        e["projection_commutation"] = r.projection_commutation;
    });
    guarded(rep, spec, "measure_bound", [&] {
        const MeasureBoundReport b = measure_bound(a, 16, opt.seed);
        const bool ok = b.max_observed <= b.envelope * (1.0 + 1e-9) &&
                        (!b.exact_bound || b.max_observed <= *b.exact_bound * (1.0 + 1e-9));
        auto& e = battery_check(rep, spec, "measure_bound",
                                ok ? CheckStatus::Pass : CheckStatus::Fail);
        e["envelope"] = b.envelope;
        if (b.exact_bound) e["exact_bound"] = *b.exact_bound;
        e["max_observed"] = b.max_observed;
        e["regions_sampled"] = b.regions_sampled;
    });
}

template <typename OperatorT>
void battery_decompose(const OperatorT& a, long max_index, const std::string& spec,
                       RunReport& rep, const CliOptions& opt, double tol) {
    guarded(rep, spec, "decomposition", [&] {
        Rng rng = make_rng(opt.seed + 1);
        const DecompositionReport d =
            decompose(a, random_vectors(rng, opt.samples, max_index, 6));
        auto& e = battery_check(rep, spec, "decomposition",
                                d.max_deviation() <= tol ? CheckStatus::Pass
                                                         : CheckStatus::Fail);
        e["annihilation"] = d.annihilation;
        e["complementarity"] = d.complementarity;
        e["idempotency"] = d.idempotency;
        e["reconstruction"] = d.reconstruction;
        e["samples"] = opt.samples;
    });
}

template <typename OperatorT>
void battery_residual(const OperatorT& a, const std::vector<Complex>& lambdas,
                      const std::string& spec, RunReport& rep, const CliOptions& opt) {
    guarded(rep, spec, "residual_emptiness", [&] {
        const std::vector<Complex> res = residual_spectrum(a, lambdas, opt.truncation);
        auto& e = battery_check(rep, spec, "residual_emptiness",
                                res.empty() ? CheckStatus::Pass : CheckStatus::Fail);
        e["residual_count"] = res.size();
        e["sampled"] = lambdas.size();
    });
}

template <typename OperatorT>
void battery_gap(const OperatorT& a, const std::string& spec, RunReport& rep,
                 const CliOptions& opt, double tol) {
    guarded(rep, spec, "gap_equivalence", [&] {
        const GapReport g = gap_theorem_check(a, opt.truncation);
        const bool proof_ok = !g.proof_identity_deviation || *g.proof_identity_deviation <= tol;
        auto& e = battery_check(rep, spec, "gap_equivalence",
                                g.predicates_agree && proof_ok ? CheckStatus::Pass
                                                               : CheckStatus::Fail);
        fill_gap_entry(e, g);
    });
}

template <typename OperatorT>
void battery_reduce(const OperatorT& a, long max_index, const std::string& spec, RunReport& rep,
                    const CliOptions& opt, double tol,
                    const std::optional<long>& truncation) {
    guarded(rep, spec, "reducible_inverse", [&] {
        Rng rng = make_rng(opt.seed + 2);
        double worst_residual = 0.0;
        bool norm_ok = true;
        int count = 0;
        try {
            for (int s = 0; s < 10; ++s) {
                const FiniteVector x = random_vector(rng, max_index, 6);
                ReducibleInverseReport r;
                if constexpr (std::is_same_v<OperatorT, DiagonalOperator>)
                    r = reducible_inverse(a, x, truncation.value_or(1000));
                else
                    r = reducible_inverse(a, x);
                worst_residual = std::max(worst_residual, r.residual);
                const double nx = vector_norm(x);
                if (vector_norm(r.inverse) > r.norm_bound * nx * (1.0 + 1e-9) + 1e-12)
                    norm_ok = false;
                ++count;
            }
        } catch (const PreconditionError& ex) {
            auto& e = battery_check(rep, spec, "reducible_inverse", CheckStatus::Pass);
            e["skipped"] = ex.what();
            return;
        }
        auto& e = battery_check(rep, spec, "reducible_inverse",
                                worst_residual <= tol && norm_ok ? CheckStatus::Pass
                                                                 : CheckStatus::Fail);
        e["norm_bound_respected"] = norm_ok;
        e["residual"] = worst_residual;
        e["samples"] = count;
    });
}

template <typename OperatorT>
void battery_calculus(const OperatorT& a, long max_index, const std::string& spec,
                      RunReport& rep, const CliOptions& opt, double tol) {
    guarded(rep, spec, "calculus_recovery", [&] {
        Rng rng = make_rng(opt.seed + 3);
        double identity_dev = 0.0, indicator_dev = 0.0, truncation_dev = 0.0;
        for (int s = 0; s < 20; ++s) {
            const FiniteVector x = random_vector(rng, max_index, 6);
            const CalculusResult idr = apply_function(a, BorelFunction::identity(), x);
            FiniteVector ax;
            if constexpr (std::is_same_v<OperatorT, DiagonalOperator>)
                ax = apply_diagonal(a, x);
            else
                ax = a.apply(x);
            identity_dev = std::max(identity_dev, vector_norm(idr.value - ax));
            const CalculusResult ind = apply_function(
                a, BorelFunction::indicator(BorelRegion::whole_plane()), x);
            indicator_dev = std::max(indicator_dev, vector_norm(ind.value - x));
            const long level = std::max(idr.converged_at, 1L);
            truncation_dev = std::max(
                truncation_dev,
                vector_norm(apply_truncated(a, BorelFunction::identity(), level, x) -
                            idr.value));
        }
        const double worst = std::max({identity_dev, indicator_dev, truncation_dev});
        auto& e = battery_check(rep, spec, "calculus_recovery",
                                worst <= tol ? CheckStatus::Pass : CheckStatus::Fail);
        e["identity_recovery"] = identity_dev;
        e["indicator_recovery"] = indicator_dev;
        e["truncation_consistency"] = truncation_dev;
    });
}

inline std::vector<Complex> diagonal_probe_lambdas(const DiagonalOperator& a,
                                                   const CliOptions& opt) {
    Rng rng = make_rng(opt.seed + 4);
    std::vector<Complex> lambdas;
    for (long k = 1; k <= 60 && static_cast<int>(lambdas.size()) < 25; ++k) {
        const RationalComplex ev = a.eigenvalue(k);
        const Complex approx = to_complex(ev);
        if (to_rational(approx) == ev) lambdas.push_back(approx);
    }
    for (const auto& lp : a.limit_points()) {
        const Complex approx = to_complex(lp);
        if (to_rational(approx) == lp) lambdas.push_back(approx);
    }
    while (lambdas.size() < 50) lambdas.push_back(random_box_complex(rng, 4.0));
    return lambdas;
}

inline void battery_shift(const std::string& spec, RunReport& rep, const CliOptions& opt) {
    guarded(rep, spec, "classify_zero", [&] {
        const PointClassification c =
            classify_point(WeightedShiftOperator{}, Complex(0, 0));
        auto& e = battery_check(rep, spec, "classify_zero",
                                c.verdict == SpectralVerdict::Residual ? CheckStatus::Pass
                                                                       : CheckStatus::Fail);
        e["verdict"] = to_string(c.verdict);
        e["witness"] = c.witness;
    });
    guarded(rep, spec, "range_obstruction", [&] {
        Rng rng = make_rng(opt.seed + 5);
        FiniteVector e1;
        e1.set(1, RationalComplex(1));
        int violations = 0;
        const int trials = 50;
        for (int s = 0; s < trials; ++s) {
            const FiniteVector x = random_vector(rng, 12, 6);
            if (norm_squared(apply_weighted_shift(x) - e1) < 1) ++violations;
        }
        auto& e = battery_check(rep, spec, "range_obstruction",
                                violations == 0 ? CheckStatus::Pass : CheckStatus::Fail);
        e["trials"] = trials;
        e["violations"] = violations;
    });
    guarded(rep, spec, "adjoint_kernel_witness", [&] {
        Rng rng = make_rng(opt.seed + 6);
        std::vector<RationalComplex> lambdas = {RationalComplex(), RationalComplex(1),
                                                RationalComplex(Rational(-1), Rational(2)),
                                                random_rational_complex(rng)};
        int failures = 0;
        for (const RationalComplex& lambda : lambdas) {
            const FiniteVector y = shift_adjoint_witness(lambda, 16);
            for (int s = 0; s < 10; ++s) {
                const FiniteVector x = random_vector(rng, 10, 6);
                const FiniteVector rx = apply_weighted_shift(x) - lambda * x;
                if (!inner(rx, y).is_zero()) ++failures;
            }
        }
        auto& e = battery_check(rep, spec, "adjoint_kernel_witness",
                                failures == 0 ? CheckStatus::Pass : CheckStatus::Fail);
        e["failures"] = failures;
        e["lambdas"] = lambdas.size();
    });
}

inline void battery_differentiation(const DifferentiationOperator& a, const std::string& spec,
                                    RunReport& rep, const CliOptions& opt) {
    guarded(rep, spec, "exponential_eigenfunctions", [&] {
        Rng rng = make_rng(opt.seed + 7);
        std::vector<Complex> lambdas = {Complex(0, 0), Complex(1, 0), Complex(0, 1),
                                        Complex(-2, 3), random_box_complex(rng, 5.0)};
        int failures = 0;
        for (const Complex& lambda : lambdas) {
            const auto [ev, residual] = differentiate_exponential(a, lambda, Complex(1, 1));
            if (ev != lambda || residual != Complex(0, 0)) ++failures;
            if (classify_point(a, lambda).verdict != SpectralVerdict::Point) ++failures;
        }
        auto& e = battery_check(rep, spec, "exponential_eigenfunctions",
                                failures == 0 ? CheckStatus::Pass : CheckStatus::Fail);
        e["failures"] = failures;
        e["lambdas"] = lambdas.size();
        e["note"] = "sigma_p = C is uncountable; the model is not scalar type";
    });
}

inline int cmd_verify(const std::vector<std::string>& paths, const CliOptions& opt,
                      std::ostream& out, std::ostream& err) {
    RunReport rep("verify", !opt.no_timestamp);
    rep.doc()["seed"] = opt.seed;
    if (paths.empty()) {
        rep.doc()["warnings"] =
            nlohmann::json::array({"no spec files given; nothing to verify"});
        return rep.emit(out);
    }
    nlohmann::json specs = nlohmann::json::array();
    for (const std::string& path : paths) {
        std::optional<LoadedOperator> loaded;
        try {
            loaded = load_operator_file(path);
        } catch (const SpecParseError& ex) {
            err << "error: " << ex.what() << "\n";
            return 65;
        } catch (const ModelError& ex) {
            battery_check(rep, path, "load", CheckStatus::Fail)["error"] = ex.what();
            nlohmann::json s;
            s["error"] = ex.what();
            s["path"] = path;
            specs.push_back(std::move(s));
            continue;
        }
        nlohmann::json s;
        s["digest"] = spec_digest(loaded->source);
        s["model"] = loaded->model_name;
        s["path"] = path;
        specs.push_back(std::move(s));

        const double tol = model_tolerance(*loaded, opt);
        if (const auto* d = std::get_if<DiagonalOperator>(&loaded->model)) {
            battery_measure(*d, 48, path, rep, opt, tol);
            battery_decompose(*d, 48, path, rep, opt, tol);
            battery_residual(*d, diagonal_probe_lambdas(*d, opt), path, rep, opt);
            battery_gap(*d, path, rep, opt, tol);
            battery_reduce(*d, 48, path, rep, opt, tol, opt.truncation);
            battery_calculus(*d, 48, path, rep, opt, tol);
        } else if (const auto* f =
                       std::get_if<FiniteDiagonalizableOperator>(&loaded->model)) {
            Rng rng = make_rng(opt.seed + 8);
            std::vector<Complex> lambdas;
            for (const Complex& ev : f->eigenvalues()) lambdas.push_back(ev);
            while (lambdas.size() < 50) lambdas.push_back(random_box_complex(rng, 4.0));
            battery_measure(*f, f->dimension(), path, rep, opt, tol);
            battery_decompose(*f, f->dimension(), path, rep, opt, tol);
            battery_residual(*f, lambdas, path, rep, opt);
            battery_gap(*f, path, rep, opt, tol);
            battery_reduce(*f, f->dimension(), path, rep, opt, tol, std::nullopt);
            battery_calculus(*f, f->dimension(), path, rep, opt, tol);
        } else if (std::holds_alternative<WeightedShiftOperator>(loaded->model)) {
            battery_shift(path, rep, opt);
        } else if (const auto* g = std::get_if<DifferentiationOperator>(&loaded->model)) {
            battery_differentiation(*g, path, rep, opt);
        }
    }
    rep.doc()["specs"] = std::move(specs);
    return rep.emit(out);
}

}  // namespace detail

// Entry point shared by the binary and in-process tests. `args` excludes the
// program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"scalar-type spectral operator toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string spec_path;
    std::vector<std::string> verify_paths;
    std::vector<std::string> lambda_args;
    std::string vector_arg;
    std::string function_arg;
    double tolerance_arg = 0.0;
    double p_arg = 2.0;

    CLI::Option* tolerance_opt =
        app.add_option("--tolerance", tolerance_arg, "override the deviation tolerance");
    CLI::Option* p_opt = app.add_option("--p", p_arg, "override the sequence-space exponent");
    app.add_flag("--no-timestamp", opt.no_timestamp,
                 "omit timestamps and wall time from the report");
    app.add_option("--seed", opt.seed, "seed for generated samples");
    app.add_option("--N", opt.truncation, "spectrum truncation level")
        ->check(CLI::PositiveNumber);
    app.add_option("--samples", opt.samples, "number of sample vectors")
        ->check(CLI::PositiveNumber);

    CLI::App* classify = app.add_subcommand("classify", "classify points of the spectrum");
    classify->add_option("spec", spec_path, "operator spec file")->required();
    classify->add_option("--lambda", lambda_args, "point to classify, as a+bi")->required();

    CLI::App* spectrum = app.add_subcommand("spectrum", "describe the spectrum");
    spectrum->add_option("spec", spec_path, "operator spec file")->required();

    CLI::App* decompose = app.add_subcommand("decompose", "kernel/range decomposition checks");
    decompose->add_option("spec", spec_path, "operator spec file")->required();

    CLI::App* gap = app.add_subcommand("gap", "spectral gap vs closed range");
    gap->add_option("spec", spec_path, "operator spec file")->required();

    CLI::App* reduce = app.add_subcommand("reduce", "invert A + E({0})");
    reduce->add_option("spec", spec_path, "operator spec file")->required();
    reduce->add_option("--vector", vector_arg, "right-hand side as JSON")->required();

    CLI::App* calculus = app.add_subcommand("calculus", "apply a Borel function of A");
    calculus->add_option("spec", spec_path, "operator spec file")->required();
    calculus->add_option("--function", function_arg, "function descriptor")->required();
    calculus->add_option("--vector", vector_arg, "argument vector as JSON")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the invariant battery");
    verify->add_option("specs", verify_paths, "operator spec files");

    for (CLI::App* sub : {classify, spectrum, decompose, gap, reduce, calculus, verify})
        sub->fallthrough();

    std::vector<std::string> full(args);
    full.insert(full.begin(), "stso");
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& s : full) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 64;
    }
    if (tolerance_opt->count() > 0) opt.tolerance = tolerance_arg;
    if (p_opt->count() > 0) opt.p_override = p_arg;

    try {
        if (app.got_subcommand(verify)) return detail::cmd_verify(verify_paths, opt, out, err);

        std::optional<LoadedOperator> loaded;
        try {
            loaded = load_operator_file(spec_path);
            if (opt.p_override) {
                if (auto* d = std::get_if<DiagonalOperator>(&loaded->model)) {
                    DiagonalOperator replaced(d->prepend(), d->tail_expr(), d->limit_points(),
                                              *opt.p_override);
                    loaded->model = std::move(replaced);
                }
            }
        } catch (const SpecParseError& e) {
            err << "error: " << e.what() << "\n";
            return 65;
        } catch (const ModelError& e) {
            RunReport rep(app.get_subcommands().front()->get_name(), !opt.no_timestamp);
            rep.add_error("load", e.what(), CheckStatus::Fail);
            return rep.emit(out);
        }

        if (app.got_subcommand(classify)) {
            std::vector<Complex> lambdas;
            for (const std::string& s : lambda_args) lambdas.push_back(parse_complex(s));
            return detail::cmd_classify(*loaded, lambdas, opt, out);
        }
        if (app.got_subcommand(spectrum)) return detail::cmd_spectrum(*loaded, opt, out);
        if (app.got_subcommand(decompose)) return detail::cmd_decompose(*loaded, opt, out);
        if (app.got_subcommand(gap)) return detail::cmd_gap(*loaded, opt, out);
        if (app.got_subcommand(reduce))
            return detail::cmd_reduce(*loaded, detail::parse_vector_arg(vector_arg), opt, out);
        if (app.got_subcommand(calculus))
            return detail::cmd_calculus(*loaded, function_arg,
                                        detail::parse_vector_arg(vector_arg), opt, out);
    } catch (const ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const SpecParseError& e) {
        err << "error: " << e.what() << "\n";
        return 65;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 70;
    }
    err << "usage error: no subcommand selected\n";
    return 64;
}

}  // namespace stso
