#pragma once

#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "logmaj/errors.hpp"
#include "logmaj/funclass.hpp"

namespace logmaj {

enum class NodeKind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
enum class CallFn { Exp, Log, Min, Max, Sqrt };

struct ExprAst;
using ExprPtr = std::shared_ptr<const ExprAst>;

/// Expression tree over the single variable x.
struct ExprAst {
    NodeKind kind;
    double number = 0.0;        // Number
    CallFn fn = CallFn::Exp;    // Call
    std::vector<ExprPtr> args;
};

bool ast_equal(const ExprPtr& a, const ExprPtr& b);

/// Structured syntax error: byte offset into the source plus the token set
/// that would have been accepted there.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, size_t offset, std::vector<std::string> expected);

    size_t offset;
    std::vector<std::string> expected;
};

/// Grammar, lowest to highest precedence: add/sub, mul/div, unary minus,
/// '^' (right-associative), calls/parens/atoms. Whitespace-insensitive.
ExprPtr parse(std::string_view src);

/// Fully parenthesised rendering; parses back to an identical tree.
std::string pretty_print(const ExprPtr& ast);

double eval_expr(const ExprPtr& ast, double x);

/// Forward-mode derivative value. tie (when non-null) is set when a min/max
/// met equal arguments at this x; the first argument's derivative is used.
struct Dual {
    double value = 0.0;
    double deriv = 0.0;
};
Dual eval_dual(const ExprPtr& ast, double x, bool* tie = nullptr);

/// Wraps the tree as a ScalarFunction on [0, domain_end). Derivatives come
/// from dual-number evaluation; min/max ties fall back to one-sided
/// differences. Non-negativity is not assumed here; classify checks it.
ScalarFunction to_function(const ExprPtr& ast, double domain_end = std::numeric_limits<double>::infinity());

ScalarFunction parse_function(std::string_view src,
                              double domain_end = std::numeric_limits<double>::infinity());

} // namespace logmaj
