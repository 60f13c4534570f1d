#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "logmaj/funcparse.hpp"
#include "logmaj/rng.hpp"

using namespace logmaj;

TEST_CASE("grammar shapes from the worked examples") {
    const ExprPtr pow = parse("x^0.5");
    REQUIRE(pow->kind == NodeKind::Pow);
    CHECK(pow->args[0]->kind == NodeKind::Variable);
    CHECK(pow->args[1]->number == doctest::Approx(0.5));

    const ExprPtr omx = parse("1 - exp(-x)");
    REQUIRE(omx->kind == NodeKind::Sub);
    CHECK(omx->args[0]->number == doctest::Approx(1.0));
    REQUIRE(omx->args[1]->kind == NodeKind::Call);
    CHECK(omx->args[1]->fn == CallFn::Exp);
    CHECK(omx->args[1]->args[0]->kind == NodeKind::Neg);

    const ExprPtr clip = parse("min(x, 1)");
    REQUIRE(clip->kind == NodeKind::Call);
    CHECK(clip->fn == CallFn::Min);
    CHECK(clip->args.size() == 2);
}

TEST_CASE("precedence and associativity") {
    // '^' binds tighter than unary minus on its base
    const ExprPtr neg_pow = parse("-x^2");
    REQUIRE(neg_pow->kind == NodeKind::Neg);
    CHECK(neg_pow->args[0]->kind == NodeKind::Pow);

    // right-associative power chain
    CHECK(eval_expr(parse("2^3^2"), 0.0) == doctest::Approx(512.0));

    CHECK(eval_expr(parse("2+3*4"), 0.0) == doctest::Approx(14.0));
    CHECK(eval_expr(parse("(2+3)*4"), 0.0) == doctest::Approx(20.0));
    CHECK(eval_expr(parse("2-3-4"), 0.0) == doctest::Approx(-5.0));
    CHECK(eval_expr(parse("12/3/2"), 0.0) == doctest::Approx(2.0));
    CHECK(eval_expr(parse("x^-1"), 4.0) == doctest::Approx(0.25));
    CHECK(eval_expr(parse("1.5e2"), 0.0) == doctest::Approx(150.0));
    CHECK(eval_expr(parse("  1 +  2 "), 0.0) == doctest::Approx(3.0));
}

TEST_CASE("syntax errors carry offsets and expected tokens") {
    try {
        parse("1 + ");
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
        CHECK_FALSE(e.expected.empty());
    }

    try {
        parse("foo(x)");
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 0);
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }

    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("(1"), ParseError);
    CHECK_THROWS_AS(parse("min(x)"), ParseError);
    CHECK_THROWS_AS(parse("exp(x, 1)"), ParseError);
    CHECK_THROWS_AS(parse("1 2"), ParseError);
    CHECK_THROWS_AS(parse("y + 1"), ParseError);
}

TEST_CASE("parser never crashes on fuzzed input") {
    Rng rng(909);
    const char alphabet[] = "x01.5+-*/^()minmaxexplogsqrt, @#";
    for (int trial = 0; trial < 500; ++trial) {
        std::string s;
        const int len = static_cast<int>(rng.next_uniform(0, 24));
        for (int i = 0; i < len; ++i) {
            s += alphabet[static_cast<size_t>(rng.next_uniform(0, sizeof(alphabet) - 1))];
        }
        try {
            parse(s);
        } catch (const ParseError&) {
            // structured failure is the contract
        }
    }
}

TEST_CASE("round trip: pretty printed expressions reparse identically") {
    const std::vector<std::string> corpus = {
        "x^0.5",
        "1 - exp(-x)",
        "min(x, 1)",
        "max(x, 0.25)",
        "x",
        "x^2",
        "x*exp(x)",
        "sqrt(x)",
        "log(1 + x)",
        "2*x + 1",
        "x/(1 + x)",
        "x^2 - 2*x + 1",
        "exp(x) - 1",
        "min(x^2, x)",
        "-x + 2",
        "x^1.5",
        "(x + 1)^0.5 - 1",
        "x^(1/3)",
        "1/(1 + exp(-x))",
        "sqrt(x)*min(x, 2)",
        "max(min(x, 2), 0.5)",
        "2.5e-1*x",
    };
    CHECK(corpus.size() >= 20);
    for (const auto& src : corpus) {
        const ExprPtr first = parse(src);
        const ExprPtr second = parse(pretty_print(first));
        CHECK_MESSAGE(ast_equal(first, second), src, " -> ", pretty_print(first));
    }
}

TEST_CASE("evaluation of the worked examples") {
    ScalarFunction ident = parse_function("x");
    CHECK(ident(3.0) == doctest::Approx(3.0));
    CHECK(ident.derivative(3.0) == doctest::Approx(1.0));

    ScalarFunction square = parse_function("x^2");
    CHECK(square(3.0) == doctest::Approx(9.0));
    CHECK(square.derivative(3.0) == doctest::Approx(6.0));

    ScalarFunction omx = parse_function("1 - exp(-x)");
    CHECK(omx(1.0) == doctest::Approx(0.6321205588285577).epsilon(1e-12));
    CHECK(omx.derivative(1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-12));
}

TEST_CASE("evaluation errors surface with the offending point") {
    const ExprPtr div = parse("1/(x - 1)");
    try {
        eval_expr(div, 1.0);
        FAIL("expected an EvalError");
    } catch (const EvalError& e) {
        CHECK(e.at_x == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(eval_expr(parse("log(x - 2)"), 1.0), EvalError);
    CHECK_THROWS_AS(eval_expr(parse("sqrt(x - 2)"), 1.0), EvalError);
    CHECK_THROWS_AS(eval_expr(parse("(x - 2)^0.5"), 1.0), EvalError);
}

TEST_CASE("dual derivatives match central differences on a smooth corpus") {
    const std::vector<std::string> corpus = {"x^2",         "x^0.5",       "exp(x)",
                                             "1 - exp(-x)", "x*exp(x)",    "log(1 + x)",
                                             "x/(1 + x)",   "sqrt(1 + x)", "x^2 - 2*x + 1",
                                             "1/(1 + exp(-x))"};
    for (const auto& src : corpus) {
        const ExprPtr ast = parse(src);
        for (int i = 0; i < 10; ++i) {
            const double x = 0.3 + 0.27 * i;
            const double h = 1e-6 * std::max(1.0, x);
            const double fd = (eval_expr(ast, x + h) - eval_expr(ast, x - h)) / (2.0 * h);
            const double dual = eval_dual(ast, x).deriv;
            CHECK_MESSAGE(std::abs(dual - fd) <= 1e-6 * std::max(1.0, std::abs(dual)),
                          src, " at x=", x, ": dual=", dual, " fd=", fd);
        }
    }
}

TEST_CASE("min/max ties flag one-sided analysis") {
    const ExprPtr clip = parse("min(x, 1)");
    bool tie = false;
    const Dual at_tie = eval_dual(clip, 1.0, &tie);
    CHECK(tie);
    CHECK(at_tie.deriv == doctest::Approx(1.0)); // first argument wins

    tie = false;
    eval_dual(clip, 0.5, &tie);
    CHECK_FALSE(tie);

    const ScalarFunction f = to_function(clip);
    const DerivSides sides = f.derivative_sides(1.0);
    CHECK(sides.kink);
    CHECK(sides.left == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sides.right == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("x-dependent exponents differentiate through the general rule") {
    const ExprPtr self_pow = parse("x^x");
    const double x = 1.7;
    const double expected = std::pow(x, x) * (std::log(x) + 1.0);
    CHECK(eval_dual(self_pow, x).deriv == doctest::Approx(expected).epsilon(1e-12));
}
