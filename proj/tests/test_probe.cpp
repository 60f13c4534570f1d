#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "logmaj/checks.hpp"
#include "logmaj/probe.hpp"

using namespace logmaj;

TEST_CASE("build_pair constructs the rotation family") {
    const auto [a0, b0] = build_pair({2.0, 1.0, 0.0});
    CHECK((a0.entries() - b0.entries()).max_abs() < 1e-12);

    // quarter turn swaps the diagonal
    const auto [a1, b1] = build_pair({2.0, 1.0, 1.5707963267948966});
    CHECK(b1(0, 0) == doctest::Approx(1.0));
    CHECK(b1(1, 1) == doctest::Approx(2.0));
    CHECK(std::abs(b1(0, 1)) < 1e-12);

    // hand trig: B_00 = a cos^2 + b sin^2
    const double theta = 0.1;
    const auto [a2, b2] = build_pair({2.0, 1.0, theta});
    const double c = std::cos(theta), s = std::sin(theta);
    CHECK(b2(0, 0) == doctest::Approx(2.0 * c * c + 1.0 * s * s).epsilon(1e-12));
    CHECK(b2(0, 1) == doctest::Approx((2.0 - 1.0) * c * s).epsilon(1e-10));
    CHECK(a2.spectrum()[0] == doctest::Approx(2.0));
    CHECK(a2.spectrum()[1] == doctest::Approx(1.0));
    CHECK(b2.spectrum()[0] == doctest::Approx(2.0));
    CHECK(b2.spectrum()[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(build_pair({1.0, 1.0, 0.1}), Error);
    CHECK_THROWS_AS(build_pair({1.0, -0.1, 0.1}), Error);
}

TEST_CASE("expansion coefficients: identity makes both sides equal") {
    const ProbeResult r = expansion_coefficients(builtin("identity"), 2.0, 0.5);
    // both reduce to a^2 (a - b) / (a + b)
    const double expected = 4.0 * 1.5 / 2.5;
    CHECK(r.rhs_coeff == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.lhs_coeff == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.necessity_holds);
}

TEST_CASE("expansion coefficients: powers at b = 0 recover the class boundary") {
    for (double t : {0.3, 0.5, 0.9, 1.0}) {
        const ProbeResult r = expansion_coefficients(builtin("power", {t}), 2.0, 0.0);
        CHECK(r.rhs_coeff == doctest::Approx(t * std::pow(2.0, 2 * t)).epsilon(1e-12));
        CHECK(r.lhs_coeff == doctest::Approx(std::pow(2.0, 2 * t)).epsilon(1e-12));
        CHECK(r.necessity_holds); // t <= 1
    }
    const ProbeResult above = expansion_coefficients(builtin("power", {1.5}), 2.0, 0.0);
    CHECK_FALSE(above.necessity_holds); // 1.5 a^{2t} > a^{2t}
    CHECK(expansion_coefficients(builtin("power", {1.5}), 2.0, 0.0, ProbeTarget::Eq5).necessity_holds);
}

TEST_CASE("expansion coefficients: exp at (3, 0) violates the concave direction") {
    const ProbeResult r = expansion_coefficients(builtin("exp"), 3.0, 0.0);
    CHECK(r.rhs_coeff == doctest::Approx(1210.2863804782053).epsilon(1e-12)); // 3 e^6
    CHECK(r.lhs_coeff == doctest::Approx(365.16286790000464).epsilon(1e-12)); // e^6 tanh(3/2)
    CHECK_FALSE(r.necessity_holds);
}

TEST_CASE("expansion coefficients validate their cell") {
    CHECK_THROWS_AS(expansion_coefficients(builtin("identity"), 1.0, 1.0), Error);
    CHECK_THROWS_AS(expansion_coefficients(builtin("identity"), 1.0, 2.0), Error);
    // f(a) = f(b) = 0 is degenerate
    const ScalarFunction dip("dip", std::numeric_limits<double>::infinity(),
                             [](double) { return 0.0; });
    CHECK_THROWS_AS(expansion_coefficients(dip, 1.0, 0.5), Error);
}

TEST_CASE("theta sweep: identity has zero margin everywhere") {
    for (const SweepRow& row : theta_sweep(builtin("identity"), 2.0, 1.0, default_thetas())) {
        CHECK(std::abs(row.margin) < 1e-12 * std::max(1.0, row.rhs));
    }
}

TEST_CASE("theta sweep validates theta") {
    CHECK_THROWS_AS(theta_sweep(builtin("identity"), 2.0, 1.0, {0.0}), Error);
    CHECK_THROWS_AS(theta_sweep(builtin("identity"), 2.0, 1.0, {1.0}), Error);
}

namespace {

// least-squares fit of v(theta) - v(0) = c2 theta^2 + c4 theta^4, returns c2
double fit_quadratic_coefficient(const std::vector<double>& thetas, const std::vector<double>& values,
                                 double value_at_zero) {
    double s44 = 0, s48 = 0, s88 = 0, b4 = 0, b8 = 0;
    for (size_t i = 0; i < thetas.size(); ++i) {
        const double t2 = thetas[i] * thetas[i], t4 = t2 * t2;
        const double y = values[i] - value_at_zero;
        s44 += t2 * t2;
        s48 += t2 * t4;
        s88 += t4 * t4;
        b4 += t2 * y;
        b8 += t4 * y;
    }
    return (b4 * s88 - b8 * s48) / (s44 * s88 - s48 * s48);
}

} // namespace

TEST_CASE("theta sweep sides shrink quadratically with the analytic coefficients") {
    struct Case {
        const char* name;
        ScalarFunction f;
        double a, b;
    };
    const std::vector<Case> cases = {
        {"power(0.5) @ (2,1)", builtin("power", {0.5}), 2.0, 1.0},
        {"one_minus_exp @ (1,0)", builtin("one_minus_exp"), 1.0, 0.0},
        {"exp @ (3,0)", builtin("exp"), 3.0, 0.0},
    };
    const std::vector<double> thetas = {0.02, 0.01, 0.005};
    for (const auto& c : cases) {
        const ProbeResult coeffs = expansion_coefficients(c.f, c.a, c.b);
        const auto rows = theta_sweep(c.f, c.a, c.b, thetas);

        const double fa = c.f(c.a);
        std::vector<double> lhs_vals, rhs_vals;
        for (const auto& row : rows) {
            lhs_vals.push_back(row.lhs);
            rhs_vals.push_back(row.rhs);
        }
        const double fit_lhs = fit_quadratic_coefficient(thetas, lhs_vals, fa * fa);
        const double fit_rhs = fit_quadratic_coefficient(thetas, rhs_vals, fa * fa);

        CHECK_MESSAGE(std::abs(fit_lhs - (-coeffs.lhs_coeff)) <=
                          1e-4 * std::max(1.0, std::abs(coeffs.lhs_coeff)),
                      c.name, ": fitted lhs=", fit_lhs, " analytic=", -coeffs.lhs_coeff);
        CHECK_MESSAGE(std::abs(fit_rhs - (-coeffs.rhs_coeff)) <=
                          1e-4 * std::max(1.0, std::abs(coeffs.rhs_coeff)),
                      c.name, ": fitted rhs=", fit_rhs, " analytic=", -coeffs.rhs_coeff);
    }
}

TEST_CASE("theta sweep: exp at (3, 0) has negative margins at finite theta") {
    const auto rows = theta_sweep(builtin("exp"), 3.0, 0.0, {0.05});
    CHECK(rows[0].margin < -1e-6);
}

TEST_CASE("sweep CSV is bit-stable with the documented header") {
    const auto rows = theta_sweep(builtin("one_minus_exp"), 1.0, 0.0, {0.1, 0.05});
    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("theta,lhs,rhs,margin\n", 0) == 0);
    CHECK(csv == sweep_csv(theta_sweep(builtin("one_minus_exp"), 1.0, 0.0, {0.1, 0.05})));
}

TEST_CASE("search finds no witness for class members against their own direction") {
    ProbeGrid grid;
    const ProbeResult ok = search_counterexample(builtin("power", {0.5}), ProbeTarget::Eq4, grid);
    CHECK_FALSE(ok.witness.has_value());
    CHECK(ok.necessity_holds);

    const ProbeResult ok5 = search_counterexample(builtin("power", {2.0}), ProbeTarget::Eq5, grid);
    CHECK_FALSE(ok5.witness.has_value());
}

TEST_CASE("search finds confirmed witnesses for functions outside the class") {
    ProbeGrid grid;
    const ProbeResult exp_hit = search_counterexample(builtin("exp"), ProbeTarget::Eq4, grid);
    REQUIRE(exp_hit.witness.has_value());
    CHECK(exp_hit.witness->margin < 0.0);

    // soundness: re-evaluate through the independent check path
    const CheckOutcome recheck =
        check_falt(exp_hit.witness->mat_a, exp_hit.witness->mat_b, builtin("exp"));
    CHECK_FALSE(recheck.holds);
    CHECK(recheck.margin < -1e-6);

    const ProbeResult root_hit = search_counterexample(builtin("power", {0.5}), ProbeTarget::Eq5, grid);
    REQUIRE(root_hit.witness.has_value());
    const CheckOutcome recheck5 =
        check_ralt(root_hit.witness->mat_a, root_hit.witness->mat_b, builtin("power", {0.5}));
    CHECK_FALSE(recheck5.holds);
    CHECK(recheck5.margin < -1e-6);
}

TEST_CASE("search is deterministic: first witness in grid order") {
    ProbeGrid grid;
    const ProbeResult first = search_counterexample(builtin("exp"), ProbeTarget::Eq4, grid);
    const ProbeResult again = search_counterexample(builtin("exp"), ProbeTarget::Eq4, grid);
    REQUIRE(first.witness.has_value());
    REQUIRE(again.witness.has_value());
    CHECK(first.witness->config.a == again.witness->config.a);
    CHECK(first.witness->config.b == again.witness->config.b);
    CHECK(first.witness->config.theta == again.witness->config.theta);
    // the b = 0 column of the first grid cell already violates for exp
    CHECK(first.witness->config.b == 0.0);
}

TEST_CASE("search skips degenerate cells and reports them") {
    // f vanishes identically below 0.5, so cells with small a degenerate
    const ScalarFunction shelf("shelf", std::numeric_limits<double>::infinity(),
                               [](double x) { return std::max(x - 0.5, 0.0); });
    ProbeGrid grid;
    grid.lo = 0.1;
    grid.hi = 0.4;
    const ProbeResult r = search_counterexample(shelf, ProbeTarget::Eq4, grid);
    CHECK_FALSE(r.witness.has_value());
    CHECK_FALSE(r.skipped_cells.empty());

    CHECK_THROWS_AS(search_counterexample(builtin("exp"), ProbeTarget::Eq4, ProbeGrid{2.0, 1.0}), Error);
}

TEST_CASE("search never produces witnesses against true class members") {
    ProbeGrid grid;
    // class A members are safe against the concave direction
    for (const auto& f : {builtin("power", {0.3}), builtin("power", {0.7}),
                          builtin("min_clip", {1.0}), builtin("one_minus_exp"),
                          builtin("constant", {1.0}), builtin("identity")}) {
        REQUIRE(classify(f, 0.25, 3.0).class_a);
        CHECK_FALSE(search_counterexample(f, ProbeTarget::Eq4, grid).witness.has_value());
    }
    // class B members are safe against the convex direction
    for (const auto& g : {builtin("power", {1.5}), builtin("power", {3.0}), builtin("x_exp_x"),
                          builtin("identity")}) {
        REQUIRE(classify(g, 0.25, 3.0).class_b);
        CHECK_FALSE(search_counterexample(g, ProbeTarget::Eq5, grid).witness.has_value());
    }
}

TEST_CASE("search exposes every catalog function that leaves its class") {
    ProbeGrid grid;
    // violations of the concave-direction derivative bound
    for (const auto& f : {builtin("exp"), builtin("power", {1.5}), builtin("power", {2.0}),
                          builtin("x_exp_x")}) {
        REQUIRE_FALSE(classify(f, 0.25, 3.0).class_a);
        CHECK_MESSAGE(search_counterexample(f, ProbeTarget::Eq4, grid).witness.has_value(), f.label());
    }
    // violations of the convex-direction bound detectable with f(0) = 0;
    // functions with f(0) > 0 sit outside the reach of this construction
    for (const auto& g : {builtin("power", {0.5}), builtin("one_minus_exp"),
                          builtin("min_clip", {1.0})}) {
        REQUIRE_FALSE(classify(g, 0.25, 3.0).class_b);
        CHECK_MESSAGE(search_counterexample(g, ProbeTarget::Eq5, grid).witness.has_value(), g.label());
    }
}

TEST_CASE("probe results serialize with and without witnesses") {
    ProbeGrid grid;
    const nlohmann::json hit =
        search_counterexample(builtin("exp"), ProbeTarget::Eq4, grid).to_json();
    CHECK(hit.at("witness").is_object());
    CHECK(hit.at("witness").at("matrix_a").at("dim") == 2);

    const nlohmann::json miss =
        search_counterexample(builtin("identity"), ProbeTarget::Eq4, grid).to_json();
    CHECK(miss.at("witness").is_null());
}
