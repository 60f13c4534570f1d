#include "logmaj/funcparse.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace logmaj {

namespace {

ExprPtr node(NodeKind kind, std::vector<ExprPtr> args = {}) {
    auto n = std::make_shared<ExprAst>();
    n->kind = kind;
    n->args = std::move(args);
    return n;
}

ExprPtr number_node(double v) {
    auto n = std::make_shared<ExprAst>();
    n->kind = NodeKind::Number;
    n->number = v;
    return n;
}

ExprPtr call_node(CallFn fn, std::vector<ExprPtr> args) {
    auto n = std::make_shared<ExprAst>();
    n->kind = NodeKind::Call;
    n->fn = fn;
    n->args = std::move(args);
    return n;
}

const char* fn_name(CallFn fn) {
    switch (fn) {
        case CallFn::Exp: return "exp";
        case CallFn::Log: return "log";
        case CallFn::Min: return "min";
        case CallFn::Max: return "max";
        case CallFn::Sqrt: return "sqrt";
    }
    return "?";
}

int fn_arity(CallFn fn) { return (fn == CallFn::Min || fn == CallFn::Max) ? 2 : 1; }

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr run() {
        skip_ws();
        if (pos_ >= src_.size()) fail("empty expression", {"expression"});
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ < src_.size()) fail("trailing input", {"operator", "end of input"});
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) {
        throw ParseError(msg, pos_, std::move(expected));
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr parse_sum() {
        ExprPtr left = parse_product();
        while (true) {
            if (eat('+'))
                left = node(NodeKind::Add, {left, parse_product()});
            else if (eat('-'))
                left = node(NodeKind::Sub, {left, parse_product()});
            else
                return left;
        }
    }

    ExprPtr parse_product() {
        ExprPtr left = parse_unary();
        while (true) {
            if (eat('*'))
                left = node(NodeKind::Mul, {left, parse_unary()});
            else if (eat('/'))
                left = node(NodeKind::Div, {left, parse_unary()});
            else
                return left;
        }
    }

    // unary minus binds looser than '^': -x^2 parses as -(x^2)
    ExprPtr parse_unary() {
        if (eat('-')) return node(NodeKind::Neg, {parse_unary()});
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (eat('^')) {
            // exponent may carry a sign and chains right-associatively
            return node(NodeKind::Pow, {base, parse_unary()});
        }
        return base;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input", {"number", "x", "function", "("});
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr inner = parse_sum();
            if (!eat(')')) fail("unbalanced parenthesis", {")"});
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'", {"number", "x", "function", "("});
    }

    ExprPtr parse_number() {
        const size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t probe = pos_ + 1;
            if (probe < src_.size() && (src_[probe] == '+' || src_[probe] == '-')) ++probe;
            if (probe < src_.size() && std::isdigit(static_cast<unsigned char>(src_[probe]))) {
                pos_ = probe;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0') {
            pos_ = start;
            fail("malformed number '" + text + "'", {"number"});
        }
        return number_node(v);
    }

    ExprPtr parse_ident() {
        const size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        if (name == "x") return node(NodeKind::Variable);

        CallFn fn;
        if (name == "exp")
            fn = CallFn::Exp;
        else if (name == "log")
            fn = CallFn::Log;
        else if (name == "min")
            fn = CallFn::Min;
        else if (name == "max")
            fn = CallFn::Max;
        else if (name == "sqrt")
            fn = CallFn::Sqrt;
        else {
            pos_ = start;
            fail("unknown identifier '" + name + "'", {"x", "exp", "log", "min", "max", "sqrt"});
        }

        if (!eat('(')) fail(std::string(fn_name(fn)) + " needs an argument list", {"("});
        std::vector<ExprPtr> args;
        args.push_back(parse_sum());
        while (eat(',')) args.push_back(parse_sum());
        if (!eat(')')) fail("unbalanced call parenthesis", {")", ","});
        if (static_cast<int>(args.size()) != fn_arity(fn)) {
            fail(std::string(fn_name(fn)) + " takes " + std::to_string(fn_arity(fn)) + " argument(s), got " +
                     std::to_string(args.size()),
                 {"argument list"});
        }
        return call_node(fn, std::move(args));
    }

    std::string_view src_;
    size_t pos_ = 0;
};

} // namespace

ParseError::ParseError(const std::string& msg, size_t offset_in, std::vector<std::string> expected_in)
    : Error("syntax error at offset " + std::to_string(offset_in) + ": " + msg),
      offset(offset_in),
      expected(std::move(expected_in)) {}

ExprPtr parse(std::string_view src) { return Parser(src).run(); }

bool ast_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    if (a->kind == NodeKind::Number && a->number != b->number) return false;
    if (a->kind == NodeKind::Call && a->fn != b->fn) return false;
    if (a->args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a->args.size(); ++i) {
        if (!ast_equal(a->args[i], b->args[i])) return false;
    }
    return true;
}

std::string pretty_print(const ExprPtr& ast) {
    switch (ast->kind) {
        case NodeKind::Number: {
            std::ostringstream os;
            os.precision(17);
            os << ast->number;
            return os.str();
        }
        case NodeKind::Variable: return "x";
        case NodeKind::Add: return "(" + pretty_print(ast->args[0]) + " + " + pretty_print(ast->args[1]) + ")";
        case NodeKind::Sub: return "(" + pretty_print(ast->args[0]) + " - " + pretty_print(ast->args[1]) + ")";
        case NodeKind::Mul: return "(" + pretty_print(ast->args[0]) + " * " + pretty_print(ast->args[1]) + ")";
        case NodeKind::Div: return "(" + pretty_print(ast->args[0]) + " / " + pretty_print(ast->args[1]) + ")";
        case NodeKind::Pow: return "(" + pretty_print(ast->args[0]) + " ^ " + pretty_print(ast->args[1]) + ")";
        case NodeKind::Neg: return "(-" + pretty_print(ast->args[0]) + ")";
        case NodeKind::Call: {
            std::string out = fn_name(ast->fn);
            out += "(";
            for (size_t i = 0; i < ast->args.size(); ++i) {
                if (i) out += ", ";
                out += pretty_print(ast->args[i]);
            }
            out += ")";
            return out;
        }
    }
    throw Error("corrupt expression node");
}

double eval_expr(const ExprPtr& ast, double x) {
    switch (ast->kind) {
        case NodeKind::Number: return ast->number;
        case NodeKind::Variable: return x;
        case NodeKind::Add: return eval_expr(ast->args[0], x) + eval_expr(ast->args[1], x);
        case NodeKind::Sub: return eval_expr(ast->args[0], x) - eval_expr(ast->args[1], x);
        case NodeKind::Mul: return eval_expr(ast->args[0], x) * eval_expr(ast->args[1], x);
        case NodeKind::Div: {
            const double den = eval_expr(ast->args[1], x);
            if (den == 0.0) throw EvalError("division by zero", x);
            return eval_expr(ast->args[0], x) / den;
        }
        case NodeKind::Pow: {
            const double base = eval_expr(ast->args[0], x);
            const double expo = eval_expr(ast->args[1], x);
            if (base < 0.0 && expo != std::floor(expo)) {
                throw EvalError("fractional power of a negative base", x);
            }
            return std::pow(base, expo);
        }
        case NodeKind::Neg: return -eval_expr(ast->args[0], x);
        case NodeKind::Call: {
            const double a = eval_expr(ast->args[0], x);
            switch (ast->fn) {
                case CallFn::Exp: return std::exp(a);
                case CallFn::Log:
                    if (a <= 0.0) throw EvalError("log of a non-positive value", x);
                    return std::log(a);
                case CallFn::Sqrt:
                    if (a < 0.0) throw EvalError("sqrt of a negative value", x);
                    return std::sqrt(a);
                case CallFn::Min: return std::min(a, eval_expr(ast->args[1], x));
                case CallFn::Max: return std::max(a, eval_expr(ast->args[1], x));
            }
            break;
        }
    }
    throw Error("corrupt expression node");
}

namespace {

Dual dual_add(Dual a, Dual b) { return {a.value + b.value, a.deriv + b.deriv}; }
Dual dual_sub(Dual a, Dual b) { return {a.value - b.value, a.deriv - b.deriv}; }
Dual dual_mul(Dual a, Dual b) { return {a.value * b.value, a.deriv * b.value + a.value * b.deriv}; }

Dual eval_dual_impl(const ExprPtr& ast, double x, bool& tie) {
    switch (ast->kind) {
        case NodeKind::Number: return {ast->number, 0.0};
        case NodeKind::Variable: return {x, 1.0};
        case NodeKind::Add: return dual_add(eval_dual_impl(ast->args[0], x, tie), eval_dual_impl(ast->args[1], x, tie));
        case NodeKind::Sub: return dual_sub(eval_dual_impl(ast->args[0], x, tie), eval_dual_impl(ast->args[1], x, tie));
        case NodeKind::Mul: return dual_mul(eval_dual_impl(ast->args[0], x, tie), eval_dual_impl(ast->args[1], x, tie));
        case NodeKind::Div: {
            const Dual a = eval_dual_impl(ast->args[0], x, tie);
            const Dual b = eval_dual_impl(ast->args[1], x, tie);
            if (b.value == 0.0) throw EvalError("division by zero", x);
            return {a.value / b.value, (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)};
        }
        case NodeKind::Pow: {
            const Dual a = eval_dual_impl(ast->args[0], x, tie);
            const Dual b = eval_dual_impl(ast->args[1], x, tie);
            if (a.value < 0.0 && b.value != std::floor(b.value)) {
                throw EvalError("fractional power of a negative base", x);
            }
            const double v = std::pow(a.value, b.value);
            if (b.deriv == 0.0) {
                // constant exponent: d/dx a^c = c a^(c-1) a'
                const double d = b.value == 0.0 ? 0.0 : b.value * std::pow(a.value, b.value - 1.0) * a.deriv;
                return {v, d};
            }
            if (a.value <= 0.0) throw EvalError("x-dependent exponent needs a positive base", x);
            return {v, v * (b.deriv * std::log(a.value) + b.value * a.deriv / a.value)};
        }
        case NodeKind::Neg: {
            const Dual a = eval_dual_impl(ast->args[0], x, tie);
            return {-a.value, -a.deriv};
        }
        case NodeKind::Call: {
            const Dual a = eval_dual_impl(ast->args[0], x, tie);
            switch (ast->fn) {
                case CallFn::Exp: {
                    const double v = std::exp(a.value);
                    return {v, v * a.deriv};
                }
                case CallFn::Log:
                    if (a.value <= 0.0) throw EvalError("log of a non-positive value", x);
                    return {std::log(a.value), a.deriv / a.value};
                case CallFn::Sqrt: {
                    if (a.value < 0.0) throw EvalError("sqrt of a negative value", x);
                    const double v = std::sqrt(a.value);
                    if (a.value == 0.0 && a.deriv != 0.0) {
                        return {0.0, std::numeric_limits<double>::infinity()};
                    }
                    return {v, a.value == 0.0 ? 0.0 : a.deriv / (2.0 * v)};
                }
                case CallFn::Min: {
                    const Dual b = eval_dual_impl(ast->args[1], x, tie);
                    if (a.value == b.value) tie = true; // first argument wins
                    return a.value <= b.value ? a : b;
                }
                case CallFn::Max: {
                    const Dual b = eval_dual_impl(ast->args[1], x, tie);
                    if (a.value == b.value) tie = true;
                    return a.value >= b.value ? a : b;
                }
            }
            break;
        }
    }
    throw Error("corrupt expression node");
}

} // namespace

Dual eval_dual(const ExprPtr& ast, double x, bool* tie) {
    bool t = false;
    const Dual d = eval_dual_impl(ast, x, t);
    if (tie) *tie = t;
    return d;
}

ScalarFunction to_function(const ExprPtr& ast, double domain_end) {
    auto eval = [ast](double x) { return eval_expr(ast, x); };
    auto deriv = [ast](double x) { return eval_dual(ast, x).deriv; };
    auto sides = [ast](double x) -> DerivSides {
        bool tie = false;
        const Dual d = eval_dual(ast, x, &tie);
        if (!tie) return {d.deriv, d.deriv, false};
        const double h = 1.4901161193847656e-08 * std::max(std::abs(x), 1.0);
        const double fl = x - h >= 0.0 ? (eval_expr(ast, x) - eval_expr(ast, x - h)) / h : d.deriv;
        const double fr = (eval_expr(ast, x + h) - eval_expr(ast, x)) / h;
        return {fl, fr, true};
    };
    return ScalarFunction(pretty_print(ast), domain_end, eval, deriv, {}, sides);
}

ScalarFunction parse_function(std::string_view src, double domain_end) {
    return to_function(parse(src), domain_end);
}

} // namespace logmaj
