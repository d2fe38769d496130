#pragma once

// Operator spec JSON, vector JSON, and the textual function/region
// descriptors consumed by the command line. The operator schema:
//
//   {"model":"diagonal","p":2,"prepend":[{"re":0,"im":0}],
//    "tail_expr":"1/n","limit_points":[{"re":0,"im":0}]}
//   {"model":"finite","matrix":[[{"re":..,"im":..},...],...]}
//   {"model":"weighted_shift"}
//   {"model":"differentiation","a":0,"b":1}

#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "stso/borel_function.hpp"
#include "stso/complex.hpp"
#include "stso/errors.hpp"
#include "stso/finite_operator.hpp"
#include "stso/operators.hpp"
#include "stso/region.hpp"
#include "stso/vector.hpp"

namespace stso {

using OperatorModel = std::variant<DiagonalOperator, FiniteDiagonalizableOperator,
                                   WeightedShiftOperator, DifferentiationOperator>;

struct LoadedOperator {
    OperatorModel model;
    nlohmann::json source;  // the parsed spec document, for digests and echoes
    std::string model_name;
};

// --- JSON pieces ------------------------------------------------------------

inline double number_field(const nlohmann::json& j, const char* key, const char* context) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number())
        throw SpecParseError(std::string(context) + ": missing numeric field \"" + key + "\"");
    return j[key].get<double>();
}

inline RationalComplex complex_from_json(const nlohmann::json& j, const char* context) {
    return RationalComplex::from_double(number_field(j, "re", context),
                                        number_field(j, "im", context));
}

inline nlohmann::json complex_to_json(const Complex& z) {
    return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

inline FiniteVector parse_vector_json(const nlohmann::json& j) {
    if (!j.is_array()) throw SpecParseError("vector: expected a JSON array");
    FiniteVector v;
    bool sparse = false, dense = false;
    long position = 0;
    for (const auto& entry : j) {
        ++position;
        if (entry.is_object() && entry.contains("k")) {
            sparse = true;
            if (!entry["k"].is_number_integer() || entry["k"].get<long>() < 1)
                throw SpecParseError("vector: \"k\" must be a positive integer");
            const long k = entry["k"].get<long>();
            v.set(k, v.at(k) + complex_from_json(entry, "vector entry"));
        } else {
            dense = true;
            v.set(position, v.at(position) + complex_from_json(entry, "vector entry"));
        }
    }
    if (sparse && dense)
        throw SpecParseError("vector: mix of indexed and positional entries");
    return v;
}

inline nlohmann::json vector_to_json(const FiniteVector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [k, c] : v.coords()) {
        nlohmann::json entry = complex_to_json(to_complex(c));
        entry["k"] = k;
        out.push_back(std::move(entry));
    }
    return out;
}

// --- operator specs ---------------------------------------------------------

inline LoadedOperator load_operator_spec(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("model") || !j["model"].is_string())
        throw SpecParseError("operator spec: missing string field \"model\"");
    const std::string model = j["model"].get<std::string>();

    if (model == "diagonal") {
        if (!j.contains("tail_expr") || !j["tail_expr"].is_string())
            throw SpecParseError("diagonal spec: missing string field \"tail_expr\"");
        LambdaExpr tail;
        try {
            tail = parse_lambda_expr(j["tail_expr"].get<std::string>());
        } catch (const ParseError& e) {
            throw SpecParseError(std::string("diagonal spec: tail_expr: ") + e.what());
        }
        std::vector<RationalComplex> prepend, limits;
        if (j.contains("prepend")) {
            if (!j["prepend"].is_array())
                throw SpecParseError("diagonal spec: \"prepend\" must be an array");
            for (const auto& entry : j["prepend"])
                prepend.push_back(complex_from_json(entry, "prepend entry"));
        }
        if (j.contains("limit_points")) {
            if (!j["limit_points"].is_array())
                throw SpecParseError("diagonal spec: \"limit_points\" must be an array");
            for (const auto& entry : j["limit_points"])
                limits.push_back(complex_from_json(entry, "limit_points entry"));
        }
        double p = 2.0;
        if (j.contains("p")) p = number_field(j, "p", "diagonal spec");
        if (!(p >= 1.0) || std::isinf(p))
            throw SpecParseError("diagonal spec: p must satisfy 1 <= p < infinity");
        return {DiagonalOperator(std::move(prepend), std::move(tail), std::move(limits), p), j,
                model};
    }

    if (model == "finite") {
        if (!j.contains("matrix") || !j["matrix"].is_array() || j["matrix"].empty())
            throw SpecParseError("finite spec: missing nonempty array field \"matrix\"");
        const auto& rows = j["matrix"];
        const int d = static_cast<int>(rows.size());
        Matrix m(d, d);
        for (int r = 0; r < d; ++r) {
            if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != d)
                throw SpecParseError("finite spec: matrix must be square");
            for (int c = 0; c < d; ++c)
                m(r, c) = to_complex(complex_from_json(rows[r][c], "matrix entry"));
        }
        return {eigendecompose(m), j, model};
    }

    if (model == "weighted_shift") return {WeightedShiftOperator{}, j, model};

    if (model == "differentiation") {
        const double a = j.contains("a") ? number_field(j, "a", "differentiation spec") : 0.0;
        const double b = j.contains("b") ? number_field(j, "b", "differentiation spec") : 1.0;
        if (!(a < b)) throw SpecParseError("differentiation spec: requires a < b");
        return {DifferentiationOperator(a, b), j, model};
    }

    throw SpecParseError("operator spec: unknown model \"" + model + "\"");
}

inline LoadedOperator load_operator_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecParseError("cannot open spec file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecParseError(path + ": " + e.what());
    }
    return load_operator_spec(j);
}

// --- textual descriptors ----------------------------------------------------

namespace detail {

struct Call {
    std::string name;
    std::vector<std::string> args;
};

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// name or name(arg, arg, ...) with nesting-aware comma splitting
inline Call parse_call(const std::string& text) {
    Call call;
    const std::string src = trim(text);
    const std::size_t open = src.find('(');
    if (open == std::string::npos) {
        call.name = src;
        return call;
    }
    if (src.empty() || src.back() != ')')
        throw ParseError("descriptor: unbalanced parentheses in \"" + src + "\"", open, {"')'"});
    call.name = trim(src.substr(0, open));
    int depth = 0;
    std::string current;
    for (std::size_t i = open + 1; i + 1 < src.size(); ++i) {
        const char c = src[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth < 0)
            throw ParseError("descriptor: unbalanced parentheses in \"" + src + "\"", i, {"','"});
        if (c == ',' && depth == 0) {
            call.args.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (depth != 0)
        throw ParseError("descriptor: unbalanced parentheses in \"" + src + "\"", src.size() - 1,
                         {"')'"});
    if (!trim(current).empty() || !call.args.empty()) call.args.push_back(trim(current));
    return call;
}

inline double parse_real_arg(const std::string& text, const char* what) {
    const Complex z = parse_complex(text);
    if (z.imag() != 0.0)
        throw ParseError(std::string(what) + " must be real", 0, {"decimal"});
    return z.real();
}

inline void expect_args(const Call& call, std::size_t n) {
    if (call.args.size() != n)
        throw ParseError("descriptor " + call.name + " expects " + std::to_string(n) +
                             " argument(s), got " + std::to_string(call.args.size()),
                         0, {});
}

}  // namespace detail

inline BorelRegion parse_region_descriptor(const std::string& text) {
    const detail::Call call = detail::parse_call(text);
    if (call.name == "plane") {
        detail::expect_args(call, 0);
        return BorelRegion::whole_plane();
    }
    if (call.name == "empty") {
        detail::expect_args(call, 0);
        return BorelRegion::empty();
    }
    if (call.name == "point") {
        detail::expect_args(call, 1);
        return BorelRegion::singleton(parse_complex(call.args[0]));
    }
    if (call.name == "disk" || call.name == "open-disk") {
        detail::expect_args(call, 2);
        const Complex c = parse_complex(call.args[0]);
        const double r = detail::parse_real_arg(call.args[1], "disk radius");
        if (!(r >= 0)) throw ParseError("disk radius must be nonnegative", 0, {});
        return call.name == "disk" ? BorelRegion::closed_disk(c, r)
                                   : BorelRegion::open_disk(c, r);
    }
    if (call.name == "halfplane") {
        detail::expect_args(call, 2);
        return BorelRegion::half_plane(parse_complex(call.args[0]),
                                       detail::parse_real_arg(call.args[1], "halfplane offset"));
    }
    if (call.name == "not") {
        detail::expect_args(call, 1);
        return region_complement(parse_region_descriptor(call.args[0]));
    }
    if (call.name == "union" || call.name == "inter") {
        detail::expect_args(call, 2);
        const BorelRegion a = parse_region_descriptor(call.args[0]);
        const BorelRegion b = parse_region_descriptor(call.args[1]);
        return call.name == "union" ? region_union(a, b) : region_intersection(a, b);
    }
    throw ParseError("unknown region \"" + call.name + "\"", 0,
                     {"point", "disk", "open-disk", "halfplane", "plane", "empty", "not",
                      "union", "inter"});
}

inline BorelFunction parse_function_descriptor(const std::string& text) {
    const detail::Call call = detail::parse_call(text);
    if (call.name == "identity") {
        detail::expect_args(call, 0);
        return BorelFunction::identity();
    }
    if (call.name == "constant") {
        detail::expect_args(call, 1);
        return BorelFunction::constant(parse_complex(call.args[0]));
    }
    if (call.name == "power") {
        detail::expect_args(call, 1);
        const double k = detail::parse_real_arg(call.args[0], "power exponent");
        if (k != std::floor(k) || k < 0 || k > double(kMaxExponent))
            throw ParseError("power exponent must be an integer in [0, 64]", 0, {});
        return BorelFunction::power(static_cast<std::int64_t>(k));
    }
    if (call.name == "reciprocal-with-cutoff" || call.name == "cutoff") {
        detail::expect_args(call, 1);
        const double gamma = detail::parse_real_arg(call.args[0], "cutoff radius");
        if (!(gamma > 0)) throw ParseError("cutoff radius must be positive", 0, {});
        return BorelFunction::cutoff_reciprocal(gamma);
    }
    if (call.name == "indicator") {
        detail::expect_args(call, 1);
        return BorelFunction::indicator(parse_region_descriptor(call.args[0]));
    }
    if (call.name == "product" || call.name == "sum") {
        detail::expect_args(call, 2);
        const BorelFunction a = parse_function_descriptor(call.args[0]);
        const BorelFunction b = parse_function_descriptor(call.args[1]);
        return call.name == "product" ? a * b : a + b;
    }
    if (call.name == "truncate" || call.name == "composition-with-truncation") {
        detail::expect_args(call, 2);
        const BorelFunction f = parse_function_descriptor(call.args[0]);
        const double n = detail::parse_real_arg(call.args[1], "truncation level");
        if (n != std::floor(n) || n < 1)
            throw ParseError("truncation level must be a positive integer", 0, {});
        return truncate_function(f, static_cast<long>(n));
    }
    throw ParseError("unknown function \"" + call.name + "\"", 0,
                     {"identity", "constant", "power", "reciprocal-with-cutoff", "indicator",
                      "product", "sum", "truncate"});
}

}  // namespace stso
