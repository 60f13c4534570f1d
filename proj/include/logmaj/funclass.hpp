#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "logmaj/errors.hpp"

namespace logmaj {

/// One-sided derivatives at a point. For smooth points left == right and
/// kink is false.
struct DerivSides {
    double left = 0.0;
    double right = 0.0;
    bool kink = false;
};

/// A continuous non-negative scalar function on [0, domain_end), with
/// derivative access. Derivatives come from an analytic rule when one is
/// attached, otherwise from central differences with step
/// h = sqrt(eps) * max(x, 1), one-sided near 0, domain_end and kinks.
class ScalarFunction {
public:
    ScalarFunction(std::string label, double domain_end,
                   std::function<double(double)> eval,
                   std::function<double(double)> deriv = {},
                   std::vector<double> kinks = {},
                   std::function<DerivSides(double)> sides = {});

    /// Domain-checked evaluation; throws EvalError outside [0, domain_end).
    double operator()(double x) const;

    double derivative(double x) const;
    DerivSides derivative_sides(double x) const;

    double domain_end() const { return domain_end_; }
    bool in_domain(double x) const { return x >= 0.0 && x < domain_end_; }
    const std::vector<double>& kinks() const { return kinks_; }
    const std::string& label() const { return label_; }
    bool has_analytic_derivative() const { return static_cast<bool>(deriv_); }

private:
    double raw_eval(double x) const;
    friend ScalarFunction geometric_mean(const ScalarFunction&, const ScalarFunction&, double);
    friend ScalarFunction numeric_inverse(const ScalarFunction&, double, double);

    std::string label_;
    double domain_end_;
    std::function<double(double)> eval_;
    std::function<double(double)> deriv_;
    std::vector<double> kinks_;
    std::function<DerivSides(double)> sides_;
};

/// Builtin catalog. Names: power(t), min_clip(c), one_minus_exp, exp,
/// constant(k), identity, x_exp_x.
ScalarFunction builtin(const std::string& name, const std::vector<double>& params = {});

/// F(y) = log f(e^y); throws EvalError when f(e^y) = 0.
double associated(const ScalarFunction& f, double y);

/// f1(x)^p * f2(x)^(1-p) for p in [0, 1].
ScalarFunction geometric_mean(const ScalarFunction& f1, const ScalarFunction& f2, double p);

/// Inverse of f restricted to [lo, hi]; f must be strictly increasing there
/// (verified by sampling). The result evaluates by bisection and satisfies
/// |f(g(y)) - y| <= 1e-10 over f([lo, hi]).
ScalarFunction numeric_inverse(const ScalarFunction& f, double lo, double hi);

enum class GeometricShape { Concave, Convex, Neither, Indeterminate };

std::string shape_name(GeometricShape s);

struct ClassWitness {
    double x = 0.0;
    double y = 0.0; // second point of a midpoint-test pair; NaN for unary conditions
    std::string condition;
    double margin = 0.0;
};

struct ClassReport {
    GeometricShape geometric_shape = GeometricShape::Neither;
    bool class_a = false;
    bool class_b = false;
    std::vector<ClassWitness> witnesses;
    std::string label;
    double lo = 0.0;
    double hi = 0.0;
    int grid_size = 0;

    nlohmann::json to_json() const;
};

/// Classifies f on [lo, hi] (0 < lo < hi < domain_end): midpoint
/// concavity/convexity of the associated function on a log-uniform grid of
/// grid_size points (registered kinks are added to the grid), then the
/// derivative conditions for classes A and B. At kinks both one-sided
/// derivatives must satisfy the condition.
ClassReport classify(const ScalarFunction& f, double lo, double hi, int grid_size = 33);

} // namespace logmaj
