#include "logmaj/funclass.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace logmaj {

namespace {

constexpr double kSqrtEps = 1.4901161193847656e-08; // sqrt(machine epsilon)

double fd_step(double x) { return kSqrtEps * std::max(std::abs(x), 1.0); }

} // namespace

ScalarFunction::ScalarFunction(std::string label, double domain_end,
                               std::function<double(double)> eval,
                               std::function<double(double)> deriv,
                               std::vector<double> kinks,
                               std::function<DerivSides(double)> sides)
    : label_(std::move(label)),
      domain_end_(domain_end),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      kinks_(std::move(kinks)),
      sides_(std::move(sides)) {
    if (domain_end_ <= 0.0) {
        throw Error("scalar function domain [0, x0) requires x0 > 0");
    }
    std::sort(kinks_.begin(), kinks_.end());
}

double ScalarFunction::raw_eval(double x) const { return eval_(x); }

double ScalarFunction::operator()(double x) const {
    if (!in_domain(x)) {
        throw EvalError("argument outside domain [0, " + std::to_string(domain_end_) + ") of " + label_, x);
    }
    return eval_(x);
}

double ScalarFunction::derivative(double x) const {
    if (deriv_) return deriv_(x);
    const double h = fd_step(x);
    const double lo_edge = h;
    const bool near_end = std::isfinite(domain_end_) && x + h >= domain_end_;
    bool near_kink = false;
    for (double k : kinks_) near_kink = near_kink || std::abs(x - k) <= h;
    if (x < lo_edge) {
        return ((*this)(x + h) - (*this)(x)) / h;
    }
    if (near_end) {
        return ((*this)(x) - (*this)(x - h)) / h;
    }
    if (near_kink) {
        // pick the side x sits on; exact-kink queries go through derivative_sides
        for (double k : kinks_) {
            if (std::abs(x - k) <= h) {
                if (x <= k) return ((*this)(x) - (*this)(x - h)) / h;
                return ((*this)(x + h) - (*this)(x)) / h;
            }
        }
    }
    return ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
}

DerivSides ScalarFunction::derivative_sides(double x) const {
    if (sides_) return sides_(x);
    const double h = fd_step(x);
    for (double k : kinks_) {
        if (std::abs(x - k) <= h && k - h >= 0.0 && in_domain(k + h)) {
            const double left = ((*this)(k) - (*this)(k - h)) / h;
            const double right = ((*this)(k + h) - (*this)(k)) / h;
            return {left, right, true};
        }
    }
    const double d = derivative(x);
    return {d, d, false};
}

ScalarFunction builtin(const std::string& name, const std::vector<double>& params) {
    const double inf = std::numeric_limits<double>::infinity();
    auto need_param = [&](const char* what) {
        if (params.empty()) throw Error(std::string("builtin '") + name + "' needs a parameter (" + what + ")");
        return params[0];
    };
    if (name == "power") {
        const double t = need_param("exponent t");
        if (t < 0.0) throw Error("power(t) requires t >= 0");
        return ScalarFunction(
            "power(" + std::to_string(t) + ")", inf,
            [t](double x) { return std::pow(x, t); },
            [t](double x) { return t == 0.0 ? 0.0 : t * std::pow(x, t - 1.0); });
    }
    if (name == "min_clip") {
        const double c = need_param("clip level c");
        if (c <= 0.0) throw Error("min_clip(c) requires c > 0");
        return ScalarFunction(
            "min_clip(" + std::to_string(c) + ")", inf,
            [c](double x) { return std::min(x, c); },
            [c](double x) { return x < c ? 1.0 : 0.0; },
            {c},
            [c](double x) -> DerivSides {
                const double h = fd_step(x);
                if (std::abs(x - c) <= h) return {1.0, 0.0, true};
                const double d = x < c ? 1.0 : 0.0;
                return {d, d, false};
            });
    }
    if (name == "one_minus_exp") {
        return ScalarFunction(
            "one_minus_exp", inf,
            [](double x) { return 1.0 - std::exp(-x); },
            [](double x) { return std::exp(-x); });
    }
    if (name == "exp") {
        return ScalarFunction(
            "exp", inf,
            [](double x) { return std::exp(x); },
            [](double x) { return std::exp(x); });
    }
    if (name == "constant") {
        const double k = need_param("value k");
        if (k <= 0.0) throw Error("constant(k) requires k > 0");
        return ScalarFunction(
            "constant(" + std::to_string(k) + ")", inf,
            [k](double) { return k; },
            [](double) { return 0.0; });
    }
    if (name == "identity") {
        return ScalarFunction(
            "identity", inf,
            [](double x) { return x; },
            [](double) { return 1.0; });
    }
    if (name == "x_exp_x") {
        return ScalarFunction(
            "x_exp_x", inf,
            [](double x) { return x * std::exp(x); },
            [](double x) { return (1.0 + x) * std::exp(x); });
    }
    throw Error("unknown builtin function '" + name + "'");
}

double associated(const ScalarFunction& f, double y) {
    const double x = std::exp(y);
    const double v = f(x);
    if (v <= 0.0) {
        throw EvalError("associated function undefined: f(e^y) = " + std::to_string(v), x);
    }
    return std::log(v);
}

ScalarFunction geometric_mean(const ScalarFunction& f1, const ScalarFunction& f2, double p) {
    if (p < 0.0 || p > 1.0) throw Error("geometric_mean weight p must lie in [0, 1]");
    const double end = std::min(f1.domain_end(), f2.domain_end());
    std::vector<double> kinks = f1.kinks();
    kinks.insert(kinks.end(), f2.kinks().begin(), f2.kinks().end());

    auto e1 = f1.eval_;
    auto e2 = f2.eval_;
    auto eval = [e1, e2, p](double x) {
        return std::pow(e1(x), p) * std::pow(e2(x), 1.0 - p);
    };
    std::function<double(double)> deriv;
    if (f1.has_analytic_derivative() && f2.has_analytic_derivative()) {
        auto d1 = f1.deriv_;
        auto d2 = f2.deriv_;
        deriv = [e1, e2, d1, d2, p](double x) {
            const double v1 = e1(x), v2 = e2(x);
            return p * std::pow(v1, p - 1.0) * d1(x) * std::pow(v2, 1.0 - p) +
                   (1.0 - p) * std::pow(v1, p) * std::pow(v2, -p) * d2(x);
        };
    }
    const std::string label =
        "geom_mean(" + f1.label() + ", " + f2.label() + ", p=" + std::to_string(p) + ")";
    return ScalarFunction(label, end, eval, deriv, kinks);
}

ScalarFunction numeric_inverse(const ScalarFunction& f, double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi) || !f.in_domain(lo) || hi >= f.domain_end()) {
        throw Error("numeric_inverse interval [lo, hi] must be inside dom(f) with lo < hi");
    }
    // strict monotonicity probe
    const int samples = 64;
    double prev_x = lo, prev_v = f(lo);
    for (int i = 1; i <= samples; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / samples;
        const double v = f(std::min(x, hi));
        if (!(v > prev_v)) {
            throw Error("numeric_inverse: f is not strictly increasing between x=" +
                        std::to_string(prev_x) + " and x=" + std::to_string(x) +
                        " (f=" + std::to_string(prev_v) + " vs " + std::to_string(v) + ")");
        }
        prev_x = x;
        prev_v = v;
    }

    const double img_lo = f(lo);
    const double img_hi = f(hi);
    auto eval_f = f.eval_;
    auto solve = [eval_f, lo, hi, img_lo, img_hi](double y) {
        if (y < img_lo || y > img_hi) {
            throw EvalError("inverse argument outside image interval [" + std::to_string(img_lo) +
                                ", " + std::to_string(img_hi) + "]",
                            y);
        }
        double a = lo, b = hi;
        for (int it = 0; it < 200 && (b - a) > 0.0; ++it) {
            const double mid = 0.5 * (a + b);
            if (eval_f(mid) < y)
                a = mid;
            else
                b = mid;
        }
        return 0.5 * (a + b);
    };

    std::function<double(double)> deriv;
    if (f.has_analytic_derivative()) {
        auto df = f.deriv_;
        deriv = [solve, df](double y) { return 1.0 / df(solve(y)); };
    }
    // the inverse is defined on [0, f(hi)], so the half-open domain bound sits
    // just past the image endpoint; y below f(lo) is reported by solve
    const double end = std::nextafter(img_hi, std::numeric_limits<double>::infinity());
    return ScalarFunction("inverse(" + f.label() + ")", end, solve, deriv);
}

std::string shape_name(GeometricShape s) {
    switch (s) {
        case GeometricShape::Concave: return "concave";
        case GeometricShape::Convex: return "convex";
        case GeometricShape::Neither: return "neither";
        case GeometricShape::Indeterminate: return "indeterminate";
    }
    return "?";
}

nlohmann::json ClassReport::to_json() const {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& wit : witnesses) {
        nlohmann::json one{{"x", wit.x}, {"condition", wit.condition}, {"margin", wit.margin}};
        if (std::isfinite(wit.y)) one["y"] = wit.y;
        w.push_back(std::move(one));
    }
    return nlohmann::json{{"label", label},
                          {"interval", {lo, hi}},
                          {"grid_size", grid_size},
                          {"geometric_shape", shape_name(geometric_shape)},
                          {"class_a", class_a},
                          {"class_b", class_b},
                          {"witnesses", std::move(w)}};
}

ClassReport classify(const ScalarFunction& f, double lo, double hi, int grid_size) {
    if (!(lo > 0.0 && lo < hi)) throw Error("classify needs 0 < lo < hi");
    if (hi >= f.domain_end()) throw Error("classify interval must lie inside dom(f)");
    if (grid_size < 3) throw Error("classify needs grid_size >= 3");

    ClassReport report;
    report.label = f.label();
    report.lo = lo;
    report.hi = hi;
    report.grid_size = grid_size;

    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> xs;
    const double ylo = std::log(lo), yhi = std::log(hi);
    for (int i = 0; i < grid_size; ++i) {
        xs.push_back(std::exp(ylo + (yhi - ylo) * i / (grid_size - 1)));
    }
    for (double k : f.kinks()) {
        if (k > lo && k < hi) xs.push_back(k);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> fx(xs.size());
    bool eval_ok = true;
    for (size_t i = 0; i < xs.size(); ++i) {
        try {
            fx[i] = f(xs[i]);
        } catch (const EvalError& e) {
            report.witnesses.push_back({xs[i], nan, std::string("evaluation-error: ") + e.what(), 0.0});
            eval_ok = false;
            fx[i] = nan;
        }
        if (eval_ok && fx[i] < 0.0) {
            report.witnesses.push_back({xs[i], nan, "non-negativity: f(x) < 0", fx[i]});
            eval_ok = false;
        }
    }
    if (!eval_ok) {
        report.geometric_shape = GeometricShape::Neither;
        std::stable_sort(report.witnesses.begin(), report.witnesses.end(),
                         [](const ClassWitness& a, const ClassWitness& b) { return a.x < b.x; });
        return report;
    }

    // Midpoint shape tests on F(y) = log f(e^y) over all grid pairs. The pair
    // midpoint in y corresponds to sqrt(x*y) in x.
    const auto F_at = [&f](double x) { return std::log(std::max(f(x), 1e-300)); };
    std::vector<double> Fx(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) Fx[i] = std::log(std::max(fx[i], 1e-300));

    const double shape_tol = 1e-9;
    bool concave_ok = true, convex_ok = true;
    for (size_t i = 0; i < xs.size(); ++i) {
        for (size_t j = i + 1; j < xs.size(); ++j) {
            const double xm = std::sqrt(xs[i] * xs[j]);
            const double mid = F_at(xm);
            const double chord = 0.5 * (Fx[i] + Fx[j]);
            const double defect = mid - chord; // >= 0 for concave F, <= 0 for convex F
            if (defect < -shape_tol) {
                concave_ok = false;
                report.witnesses.push_back({xs[i], xs[j], "geometric-concavity: F(mid) < chord", defect});
            }
            if (defect > shape_tol) {
                convex_ok = false;
                report.witnesses.push_back({xs[i], xs[j], "geometric-convexity: F(mid) > chord", -defect});
            }
        }
    }
    if (concave_ok && convex_ok)
        report.geometric_shape = GeometricShape::Indeterminate;
    else if (concave_ok)
        report.geometric_shape = GeometricShape::Concave;
    else if (convex_ok)
        report.geometric_shape = GeometricShape::Convex;
    else
        report.geometric_shape = GeometricShape::Neither;

    // Derivative conditions. Class A: 0 <= x f'(x) <= f(x); class B:
    // x f'(x) >= f(x). At kinks both one-sided derivatives must comply.
    bool cond_a = true, cond_b = true;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        const double v = fx[i];
        const double tol = 1e-8 * std::max(1.0, v);
        const DerivSides ds = f.derivative_sides(x);
        for (double d : {ds.left, ds.right}) {
            const double xd = x * d;
            if (xd < -tol) {
                cond_a = false;
                report.witnesses.push_back({x, nan, "class-A: x*f'(x) < 0", xd});
            } else if (xd > v + tol) {
                cond_a = false;
                report.witnesses.push_back({x, nan, "class-A: x*f'(x) > f(x)", v - xd});
            }
            if (xd < v - tol) {
                cond_b = false;
                report.witnesses.push_back({x, nan, "class-B: x*f'(x) < f(x)", xd - v});
            }
            if (!ds.kink) break;
        }
    }

    const bool shape_concaveish = concave_ok; // concave or indeterminate
    const bool shape_convexish = convex_ok;
    report.class_a = shape_concaveish && cond_a;
    report.class_b = shape_convexish && cond_b;

    std::stable_sort(report.witnesses.begin(), report.witnesses.end(),
                     [](const ClassWitness& a, const ClassWitness& b) { return a.x < b.x; });
    return report;
}

} // namespace logmaj
