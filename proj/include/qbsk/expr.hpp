#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "qbsk/errors.hpp"

// Recursive-descent parser for user-supplied test functions of one variable t
// on [0,1]. Grammar (loosest to tightest): + - | * / | unary - | ^ (right
// associative) | literals, t, pi, e, calls of sin cos exp log sqrt abs.

namespace qbsk {

struct ExprNode;
using ExprPtr = std::unique_ptr<ExprNode>;

struct ExprNode {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind;
    double value = 0.0;     // Number
    std::string callee;     // Call
    ExprPtr lhs, rhs;       // binary; unary/call use lhs only

    static ExprPtr number(double v) {
        auto n = std::make_unique<ExprNode>();
        n->kind = Kind::Number;
        n->value = v;
        return n;
    }
    static ExprPtr var() {
        auto n = std::make_unique<ExprNode>();
        n->kind = Kind::Var;
        return n;
    }
    static ExprPtr unary(Kind k, ExprPtr a) {
        auto n = std::make_unique<ExprNode>();
        n->kind = k;
        n->lhs = std::move(a);
        return n;
    }
    static ExprPtr binary(Kind k, ExprPtr a, ExprPtr b) {
        auto n = std::make_unique<ExprNode>();
        n->kind = k;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }
    static ExprPtr call(std::string name, ExprPtr a) {
        auto n = std::make_unique<ExprNode>();
        n->kind = Kind::Call;
        n->callee = std::move(name);
        n->lhs = std::move(a);
        return n;
    }
};

namespace detail {

inline double eval_node(const ExprNode& n, double t) {
    using K = ExprNode::Kind;
    switch (n.kind) {
        case K::Number: return n.value;
        case K::Var: return t;
        case K::Neg: return -eval_node(*n.lhs, t);
        case K::Add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
        case K::Sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
        case K::Mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
        case K::Div: {
            double d = eval_node(*n.rhs, t);
            if (d == 0.0) throw EvalError("division by zero");
            return eval_node(*n.lhs, t) / d;
        }
        case K::Pow: return std::pow(eval_node(*n.lhs, t), eval_node(*n.rhs, t));
        case K::Call: {
            double a = eval_node(*n.lhs, t);
            if (n.callee == "sin") return std::sin(a);
            if (n.callee == "cos") return std::cos(a);
            if (n.callee == "exp") return std::exp(a);
            if (n.callee == "log") {
                if (a <= 0.0) throw EvalError("log of non-positive argument");
                return std::log(a);
            }
            if (n.callee == "sqrt") {
                if (a < 0.0) throw EvalError("sqrt of negative argument");
                return std::sqrt(a);
            }
            if (n.callee == "abs") return std::abs(a);
            throw EvalError("unknown function: " + n.callee);
        }
    }
    throw EvalError("corrupt expression node");
}

inline void unparse_node(const ExprNode& n, std::ostringstream& out) {
    using K = ExprNode::Kind;
    switch (n.kind) {
        case K::Number: out << n.value; return;
        case K::Var: out << 't'; return;
        case K::Neg:
            out << "(-";
            unparse_node(*n.lhs, out);
            out << ')';
            return;
        case K::Add:
        case K::Sub:
        case K::Mul:
        case K::Div:
        case K::Pow: {
            char op = n.kind == K::Add   ? '+'
                      : n.kind == K::Sub ? '-'
                      : n.kind == K::Mul ? '*'
                      : n.kind == K::Div ? '/'
                                         : '^';
            out << '(';
            unparse_node(*n.lhs, out);
            out << op;
            unparse_node(*n.rhs, out);
            out << ')';
            return;
        }
        case K::Call:
            out << n.callee << '(';
            unparse_node(*n.lhs, out);
            out << ')';
            return;
    }
}

inline bool equal_node(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    using K = ExprNode::Kind;
    switch (a.kind) {
        case K::Number: return a.value == b.value;
        case K::Var: return true;
        case K::Neg: return equal_node(*a.lhs, *b.lhs);
        case K::Call:
            return a.callee == b.callee && equal_node(*a.lhs, *b.lhs);
        default:
            return equal_node(*a.lhs, *b.lhs) && equal_node(*a.rhs, *b.rhs);
    }
}

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr parse() {
        skip_ws();
        if (at_end()) throw ParseError(column(), "expression");
        auto e = parse_sum();
        skip_ws();
        if (!at_end()) throw ParseError(column(), "end of input or operator");
        return e;
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[nodiscard]] bool at_end() const { return pos_ >= src_.size(); }
    [[nodiscard]] int column() const { return static_cast<int>(pos_) + 1; }
    [[nodiscard]] char peek() const { return at_end() ? '\0' : src_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (!at_end() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_sum() {
        auto e = parse_product();
        for (;;) {
            if (accept('+'))
                e = ExprNode::binary(ExprNode::Kind::Add, std::move(e), parse_product());
            else if (accept('-'))
                e = ExprNode::binary(ExprNode::Kind::Sub, std::move(e), parse_product());
            else
                return e;
        }
    }

    ExprPtr parse_product() {
        auto e = parse_factor();
        for (;;) {
            if (accept('*'))
                e = ExprNode::binary(ExprNode::Kind::Mul, std::move(e), parse_factor());
            else if (accept('/'))
                e = ExprNode::binary(ExprNode::Kind::Div, std::move(e), parse_factor());
            else
                return e;
        }
    }

    // factor := '-' factor | power; power binds tighter than unary minus.
    ExprPtr parse_factor() {
        if (accept('-')) return ExprNode::unary(ExprNode::Kind::Neg, parse_factor());
        return parse_power();
    }

    ExprPtr parse_power() {
        auto base = parse_primary();
        if (accept('^'))
            return ExprNode::binary(ExprNode::Kind::Pow, std::move(base), parse_factor());
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (at_end()) throw ParseError(column(), "operand");
        char c = peek();
        if (c == '(') {
            ++pos_;
            auto e = parse_sum();
            skip_ws();
            if (!accept(')')) throw ParseError(column(), "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw ParseError(column(), "operand");
    }

    ExprPtr parse_number() {
        std::size_t start = pos_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.'))
            ++pos_;
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (!at_end() && (peek() == '+' || peek() == '-')) ++pos_;
            if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
                pos_ = mark;  // 'e' was not an exponent
            else
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
        std::string text(src_.substr(start, pos_ - start));
        try {
            std::size_t used = 0;
            double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return ExprNode::number(v);
        } catch (const std::exception&) {
            throw ParseError(static_cast<int>(start) + 1, "number");
        }
    }

    ExprPtr parse_ident() {
        std::size_t start = pos_;
        while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        if (name == "t") return ExprNode::var();
        if (name == "pi") return ExprNode::number(3.14159265358979323846);
        if (name == "e") return ExprNode::number(2.71828182845904523536);
        if (name == "sin" || name == "cos" || name == "exp" || name == "log" ||
            name == "sqrt" || name == "abs") {
            skip_ws();
            if (!accept('(')) throw ParseError(column(), "'('");
            auto arg = parse_sum();
            skip_ws();
            if (!accept(')')) throw ParseError(column(), "')'");
            return ExprNode::call(name, std::move(arg));
        }
        throw ParseError(static_cast<int>(start) + 1,
                         "'t', 'pi', 'e' or a known function name");
    }
};

}  // namespace detail

/// Owning, evaluable expression tree.
class Expr {
  public:
    explicit Expr(ExprPtr root) : root_(std::move(root)) {}

    [[nodiscard]] double eval(double t) const { return detail::eval_node(*root_, t); }

    [[nodiscard]] std::string unparse() const {
        std::ostringstream out;
        out.precision(17);
        detail::unparse_node(*root_, out);
        return out.str();
    }

    friend bool operator==(const Expr& a, const Expr& b) {
        return detail::equal_node(*a.root_, *b.root_);
    }

  private:
    ExprPtr root_;
};

inline Expr parse_expr(std::string_view src) {
    return Expr(detail::Parser(src).parse());
}

}  // namespace qbsk
