#pragma once

// Eigenvalue-expression DSL: arithmetic over the index variable n, complex
// decimal literals, and integer powers.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' integer)?
//   atom   := 'n' | complex-literal | '(' expr ')' | '-' atom
//   complex-literal := decimal ('i')? | decimal ('+'|'-') decimal 'i'
//
// Whitespace is insignificant between tokens; 'i' must directly follow its
// decimal. An a+bi pair folds into a single literal atom, so "1+2i*n" is
// (1+2i)*n; parenthesize to override. Unary minus forms an atom, so "-2^2"
// is (-2)^2.

#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stso/complex.hpp"
#include "stso/errors.hpp"
#include "stso/rational.hpp"

namespace stso {

enum class ExprKind { Literal, Var, Neg, Add, Sub, Mul, Div, Pow };

struct ExprNode {
    ExprKind kind;
    RationalComplex literal;        // Literal only
    std::int64_t exponent = 0;      // Pow only
    std::shared_ptr<const ExprNode> lhs;  // unary child / left operand
    std::shared_ptr<const ExprNode> rhs;
};

// Immutable expression tree in the index variable n (n >= 1).
struct LambdaExpr {
    std::shared_ptr<const ExprNode> root;
    bool valid() const { return root != nullptr; }
};

// --- builders ---------------------------------------------------------------

inline LambdaExpr expr_literal(RationalComplex v) {
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprKind::Literal;
    node->literal = std::move(v);
    return {node};
}

inline LambdaExpr expr_literal(const Complex& v) { return expr_literal(to_rational(v)); }

inline LambdaExpr expr_var() {
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprKind::Var;
    return {node};
}

namespace detail {
inline LambdaExpr make_binary(ExprKind kind, LambdaExpr a, LambdaExpr b) {
    auto node = std::make_shared<ExprNode>();
    node->kind = kind;
    node->lhs = std::move(a.root);
    node->rhs = std::move(b.root);
    return {node};
}
}  // namespace detail

inline LambdaExpr expr_add(LambdaExpr a, LambdaExpr b) { return detail::make_binary(ExprKind::Add, std::move(a), std::move(b)); }
inline LambdaExpr expr_sub(LambdaExpr a, LambdaExpr b) { return detail::make_binary(ExprKind::Sub, std::move(a), std::move(b)); }
inline LambdaExpr expr_mul(LambdaExpr a, LambdaExpr b) { return detail::make_binary(ExprKind::Mul, std::move(a), std::move(b)); }
inline LambdaExpr expr_div(LambdaExpr a, LambdaExpr b) { return detail::make_binary(ExprKind::Div, std::move(a), std::move(b)); }

inline LambdaExpr expr_neg(LambdaExpr a) {
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprKind::Neg;
    node->lhs = std::move(a.root);
    return {node};
}

inline LambdaExpr expr_pow(LambdaExpr base, std::int64_t k) {
    if (k < -kMaxExponent || k > kMaxExponent)
        throw ParseError("integer exponent overflow", 0, {});
    auto node = std::make_shared<ExprNode>();
    node->kind = ExprKind::Pow;
    node->exponent = k;
    node->lhs = std::move(base.root);
    return {node};
}

// 1/e, built from grammar primitives.
inline LambdaExpr expr_reciprocal(LambdaExpr e) {
    return expr_div(expr_literal(RationalComplex(1)), std::move(e));
}

// --- structural equality ----------------------------------------------------

inline bool expr_equal(const ExprNode* a, const ExprNode* b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Literal: return a->literal == b->literal;
        case ExprKind::Var: return true;
        case ExprKind::Neg: return expr_equal(a->lhs.get(), b->lhs.get());
        case ExprKind::Pow:
            return a->exponent == b->exponent && expr_equal(a->lhs.get(), b->lhs.get());
        default:
            return expr_equal(a->lhs.get(), b->lhs.get()) && expr_equal(a->rhs.get(), b->rhs.get());
    }
}

inline bool expr_equal(const LambdaExpr& a, const LambdaExpr& b) {
    return expr_equal(a.root.get(), b.root.get());
}

// --- evaluation -------------------------------------------------------------

namespace detail {
inline RationalComplex eval_node(const ExprNode* node, long n) {
    switch (node->kind) {
        case ExprKind::Literal: return node->literal;
        case ExprKind::Var: return RationalComplex(n);
        case ExprKind::Neg: return -eval_node(node->lhs.get(), n);
        case ExprKind::Add: return eval_node(node->lhs.get(), n) + eval_node(node->rhs.get(), n);
        case ExprKind::Sub: return eval_node(node->lhs.get(), n) - eval_node(node->rhs.get(), n);
        case ExprKind::Mul: return eval_node(node->lhs.get(), n) * eval_node(node->rhs.get(), n);
        case ExprKind::Div: {
            RationalComplex d = eval_node(node->rhs.get(), n);
            if (d.is_zero()) throw EvalError("division by zero at n=" + std::to_string(n));
            return eval_node(node->lhs.get(), n) / d;
        }
        case ExprKind::Pow: {
            RationalComplex b = eval_node(node->lhs.get(), n);
            if (node->exponent < 0 && b.is_zero())
                throw EvalError("division by zero at n=" + std::to_string(n) +
                                " (negative power of zero)");
            return pow(b, node->exponent);
        }
    }
    throw EvalError("corrupt expression node");
}
}  // namespace detail

// Exact evaluation over the complex rationals.
inline RationalComplex eval_lambda_expr_exact(const LambdaExpr& expr, long n) {
    if (!expr.valid()) throw EvalError("empty expression");
    if (n < 1) throw EvalError("index must be >= 1");
    return detail::eval_node(expr.root.get(), n);
}

// Double-precision value: the exact value correctly rounded.
inline Complex eval_lambda_expr(const LambdaExpr& expr, long n) {
    const Complex z = to_complex(eval_lambda_expr_exact(expr, n));
    if (!is_finite(z)) throw EvalError("value at n=" + std::to_string(n) + " overflows double");
    return z;
}

namespace detail {
// Approximate double-only evaluation for scanning sweeps. Never throws;
// division by (floating) zero yields NaN. Conclusions drawn from it must be
// confirmed through the exact evaluator.
inline Complex eval_fast_node(const ExprNode* node, long n) {
    switch (node->kind) {
        case ExprKind::Literal: return to_complex(node->literal);
        case ExprKind::Var: return {double(n), 0.0};
        case ExprKind::Neg: return -eval_fast_node(node->lhs.get(), n);
        case ExprKind::Add: return eval_fast_node(node->lhs.get(), n) + eval_fast_node(node->rhs.get(), n);
        case ExprKind::Sub: return eval_fast_node(node->lhs.get(), n) - eval_fast_node(node->rhs.get(), n);
        case ExprKind::Mul: return eval_fast_node(node->lhs.get(), n) * eval_fast_node(node->rhs.get(), n);
        case ExprKind::Div: {
            const Complex d = eval_fast_node(node->rhs.get(), n);
            if (d == Complex(0, 0)) return {std::nan(""), std::nan("")};
            return eval_fast_node(node->lhs.get(), n) / d;
        }
        case ExprKind::Pow: {
            Complex b = eval_fast_node(node->lhs.get(), n);
            std::int64_t e = node->exponent;
            if (e < 0) {
                if (b == Complex(0, 0)) return {std::nan(""), std::nan("")};
                b = Complex(1, 0) / b;
                e = -e;
            }
            Complex acc(1, 0);
            while (e > 0) {
                if (e & 1) acc *= b;
                b *= b;
                e >>= 1;
            }
            return acc;
        }
    }
    return {std::nan(""), std::nan("")};
}
}  // namespace detail

inline Complex eval_lambda_expr_fast(const LambdaExpr& expr, long n) {
    return detail::eval_fast_node(expr.root.get(), n);
}

// --- parser -----------------------------------------------------------------

namespace detail {

enum class Tok { Number, VarN, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok type;
    std::size_t pos;
    Rational value;       // Number
    bool imaginary = false;
    bool has_dot = false;
};

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        switch (c) {
            case '+': out.push_back({Tok::Plus, start}); ++i; continue;
            case '-': out.push_back({Tok::Minus, start}); ++i; continue;
            case '*': out.push_back({Tok::Star, start}); ++i; continue;
            case '/': out.push_back({Tok::Slash, start}); ++i; continue;
            case '^': out.push_back({Tok::Caret, start}); ++i; continue;
            case '(': out.push_back({Tok::LParen, start}); ++i; continue;
            case ')': out.push_back({Tok::RParen, start}); ++i; continue;
            case 'n': out.push_back({Tok::VarN, start}); ++i; continue;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            BigInt int_part = 0;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                int_part = int_part * 10 + (src[i] - '0');
                ++i;
            }
            Rational value(int_part);
            bool has_dot = false;
            if (i < src.size() && src[i] == '.') {
                has_dot = true;
                ++i;
                if (i >= src.size() || !std::isdigit(static_cast<unsigned char>(src[i])))
                    throw ParseError("syntax error: digits required after decimal point", i,
                                     {"digit"});
                BigInt frac = 0, scale = 1;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                    frac = frac * 10 + (src[i] - '0');
                    scale *= 10;
                    ++i;
                }
                value += Rational(frac, scale);
            }
            bool imaginary = false;
            if (i < src.size() && src[i] == 'i') {
                imaginary = true;
                ++i;
            }
            Token t{Tok::Number, start};
            t.value = value;
            t.imaginary = imaginary;
            t.has_dot = has_dot;
            out.push_back(t);
            continue;
        }
        throw ParseError(std::string("syntax error: unexpected character '") + c + "'", start,
                         {"number", "'n'", "'('", "operator"});
    }
    out.push_back({Tok::End, src.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    LambdaExpr parse() {
        LambdaExpr e = parse_expr();
        if (peek().type != Tok::End)
            throw ParseError("syntax error: unexpected trailing input", peek().pos,
                             {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& advance() { return toks_[pos_++]; }

    LambdaExpr parse_expr() {
        LambdaExpr lhs = parse_term();
        while (peek().type == Tok::Plus || peek().type == Tok::Minus) {
            const bool plus = advance().type == Tok::Plus;
            LambdaExpr rhs = parse_term();
            lhs = plus ? expr_add(std::move(lhs), std::move(rhs))
                       : expr_sub(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    LambdaExpr parse_term() {
        LambdaExpr lhs = parse_factor();
        while (peek().type == Tok::Star || peek().type == Tok::Slash) {
            const bool mul = advance().type == Tok::Star;
            LambdaExpr rhs = parse_factor();
            lhs = mul ? expr_mul(std::move(lhs), std::move(rhs))
                      : expr_div(std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    LambdaExpr parse_factor() {
        LambdaExpr base = parse_atom();
        if (peek().type != Tok::Caret) return base;
        advance();
        bool negative = false;
        if (peek().type == Tok::Minus) {
            negative = true;
            advance();
        }
        const Token& t = peek();
        if (t.type != Tok::Number || t.imaginary || t.has_dot)
            throw ParseError("syntax error: exponent must be an integer", t.pos, {"integer"});
        advance();
        const Rational& v = t.value;
        if (boost::multiprecision::denominator(v) != 1 ||
            boost::multiprecision::numerator(v) > kMaxExponent)
            throw ParseError("integer exponent overflow", t.pos, {});
        std::int64_t k = boost::multiprecision::numerator(v).convert_to<std::int64_t>();
        return expr_pow(std::move(base), negative ? -k : k);
    }

    LambdaExpr parse_atom() {
        const Token& t = peek();
        switch (t.type) {
            case Tok::VarN:
                advance();
                return expr_var();
            case Tok::Minus:
                advance();
                return expr_neg(parse_atom());
            case Tok::LParen: {
                advance();
                LambdaExpr inner = parse_expr();
                if (peek().type != Tok::RParen)
                    throw ParseError("syntax error: unbalanced parenthesis", peek().pos, {"')'"});
                advance();
                return inner;
            }
            case Tok::Number: {
                advance();
                if (t.imaginary) return expr_literal(RationalComplex(Rational(0), t.value));
                // a+bi / a-bi folds into one literal when the second part is
                // an imaginary number token.
                if ((peek().type == Tok::Plus || peek().type == Tok::Minus) &&
                    peek(1).type == Tok::Number && peek(1).imaginary) {
                    const bool plus = advance().type == Tok::Plus;
                    const Token& im = advance();
                    return expr_literal(RationalComplex(t.value, plus ? im.value : -im.value));
                }
                return expr_literal(RationalComplex(t.value, Rational(0)));
            }
            default:
                throw ParseError("syntax error: expression expected", t.pos,
                                 {"number", "'n'", "'('", "'-'"});
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline LambdaExpr parse_lambda_expr(const std::string& src) {
    return detail::Parser(detail::lex(src)).parse();
}

// --- printer ----------------------------------------------------------------

namespace detail {

// Finite decimal rendering; only rationals with denominator 2^a*5^b have one.
inline std::optional<std::string> decimal_string(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    int twos = 0, fives = 0;
    while (den % 2 == 0) { den /= 2; ++twos; }
    while (den % 5 == 0) { den /= 5; ++fives; }
    if (den != 1) return std::nullopt;
    int digits = std::max(twos, fives);
    for (int k = twos; k < digits; ++k) num *= 2;
    for (int k = fives; k < digits; ++k) num *= 5;
    const bool neg = num < 0;
    if (neg) num = -num;
    std::string s = num.str();
    if (digits > 0) {
        if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
        s.insert(s.size() - digits, ".");
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    return (neg ? "-" : "") + s;
}

inline std::string print_rational(const Rational& r) {
    if (auto dec = decimal_string(r)) return *dec;
    // Not expressible as a finite decimal; rendered as a quotient, which
    // reparses as a division node rather than a literal.
    return "(" + boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str() + ")";
}

inline std::string print_literal(const RationalComplex& v) {
    if (v.im == 0) return print_rational(v.re);
    if (v.re == 0) return print_rational(v.im) + "i";
    std::string out = print_rational(v.re);
    if (v.im > 0)
        out += " + " + print_rational(v.im) + "i";
    else
        out += " - " + print_rational(-v.im) + "i";
    return out;
}

// Is the printed literal a single atom (no internal top-level operator)?
inline bool literal_is_atomic(const RationalComplex& v) {
    if (v.im == 0) return v.re >= 0;
    if (v.re == 0) return v.im >= 0;
    return v.re >= 0;  // a+bi folds back into one atom
}

inline int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Pow: return 3;
        default: return 4;  // atoms, including unary minus
    }
}

inline std::string print_node(const ExprNode* node);

// Does the printed form begin with a pure-imaginary number token? Such a
// token directly after '+' or '-' would fold into the preceding literal.
inline bool starts_with_imaginary(const ExprNode* node) {
    switch (node->kind) {
        case ExprKind::Literal: return node->literal.re == 0 && node->literal.im > 0;
        case ExprKind::Var:
        case ExprKind::Neg: return false;
        default: return starts_with_imaginary(node->lhs.get());
    }
}

inline std::string print_child(const ExprNode* child, int min_prec, bool strict,
                               bool sum_rhs = false) {
    std::string s = print_node(child);
    int prec = precedence(child->kind);
    if (child->kind == ExprKind::Literal && !literal_is_atomic(child->literal))
        prec = 1;  // renders with an internal sign
    const bool fold_risk = sum_rhs && prec > 1 && starts_with_imaginary(child);
    if (prec < min_prec || (strict && prec == min_prec) || fold_risk) return "(" + s + ")";
    return s;
}

inline std::string print_node(const ExprNode* node) {
    switch (node->kind) {
        case ExprKind::Literal: return print_literal(node->literal);
        case ExprKind::Var: return "n";
        case ExprKind::Neg: {
            const ExprNode* c = node->lhs.get();
            const bool atomic =
                c->kind == ExprKind::Var || c->kind == ExprKind::Neg ||
                (c->kind == ExprKind::Literal && literal_is_atomic(c->literal));
            return "-" + (atomic ? print_node(c) : "(" + print_node(c) + ")");
        }
        case ExprKind::Add:
            return print_child(node->lhs.get(), 1, false) + " + " +
                   print_child(node->rhs.get(), 1, true, true);
        case ExprKind::Sub:
            return print_child(node->lhs.get(), 1, false) + " - " +
                   print_child(node->rhs.get(), 1, true, true);
        case ExprKind::Mul:
            return print_child(node->lhs.get(), 2, false) + "*" +
                   print_child(node->rhs.get(), 2, true);
        case ExprKind::Div:
            return print_child(node->lhs.get(), 2, false) + "/" +
                   print_child(node->rhs.get(), 2, true);
        case ExprKind::Pow: {
            const ExprNode* b = node->lhs.get();
            const bool atomic =
                b->kind == ExprKind::Var || b->kind == ExprKind::Neg ||
                (b->kind == ExprKind::Literal && literal_is_atomic(b->literal));
            return (atomic ? print_node(b) : "(" + print_node(b) + ")") + "^" +
                   std::to_string(node->exponent);
        }
    }
    return "?";
}

}  // namespace detail

// Canonical text form. For any parser-produced tree, parsing the printed
// text yields a structurally equal tree.
inline std::string print_lambda_expr(const LambdaExpr& expr) {
    if (!expr.valid()) return "";
    return detail::print_node(expr.root.get());
}

}  // namespace stso
