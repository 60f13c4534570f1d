#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "logmaj/majorization.hpp"
#include "logmaj/rng.hpp"

using namespace logmaj;

TEST_CASE("log_submajorize on the worked pairs") {
    const MajorizationReport up = log_submajorize(Spectrum({2, 1}), Spectrum({3, 1}));
    CHECK(up.holds);
    CHECK(up.k_margins[0] == doctest::Approx(std::log(1.5)));
    CHECK(up.k_margins[1] == doctest::Approx(std::log(1.5)));

    const MajorizationReport down = log_submajorize(Spectrum({3, 1}), Spectrum({2, 2}));
    CHECK_FALSE(down.holds);
    CHECK(down.k_margins[0] == doctest::Approx(std::log(2.0 / 3.0)));

    const MajorizationReport self = log_submajorize(Spectrum({4, 2, 1}), Spectrum({4, 2, 1}));
    CHECK(self.holds);
    for (double m : self.k_margins) CHECK(m == doctest::Approx(0.0));
}

TEST_CASE("weak_majorize on the worked pairs") {
    const MajorizationReport up = weak_majorize(Spectrum({1, 1}), Spectrum({2, 0}));
    CHECK(up.holds);
    CHECK(up.k_margins[0] == doctest::Approx(1.0));
    CHECK(up.k_margins[1] == doctest::Approx(0.0));

    CHECK_FALSE(weak_majorize(Spectrum({2, 0}), Spectrum({1, 1})).holds);

    const MajorizationReport self = weak_majorize(Spectrum({5, 3}), Spectrum({5, 3}));
    CHECK(self.holds);
    for (double m : self.k_margins) CHECK(m == doctest::Approx(0.0));
}

TEST_CASE("errors and the zero policy") {
    CHECK_THROWS_AS(log_submajorize(Spectrum({1}), Spectrum({1, 2})), Error);
    CHECK_THROWS_AS(weak_majorize(Spectrum({1}), Spectrum({1, 2})), Error);
    CHECK_THROWS_AS(log_submajorize(Spectrum({1, -0.5}), Spectrum({1, 1})), Error);

    // a zero shared at the same index contributes nothing
    const MajorizationReport both = log_submajorize(Spectrum({2, 0}), Spectrum({3, 0}));
    CHECK(both.zero_policy_applied);
    CHECK(both.holds);
    CHECK(both.k_margins[1] == doctest::Approx(both.k_margins[0]));

    // a one-sided zero on the right produces a hugely negative margin
    const MajorizationReport one_sided = log_submajorize(Spectrum({2, 1}), Spectrum({3, 0}));
    CHECK(one_sided.zero_policy_applied);
    CHECK_FALSE(one_sided.holds);
}

TEST_CASE("margins keep being reported after the first failure") {
    const MajorizationReport r = log_submajorize(Spectrum({3, 2, 2}), Spectrum({1, 1, 1}));
    CHECK(r.k_margins.size() == 3);
    CHECK_FALSE(r.holds);
    CHECK(r.k_margins[1] < r.k_margins[0]);
    CHECK(r.k_margins[2] < r.k_margins[1]);
}

namespace {

// sorted non-increasing spectrum with entries in [lo, hi]
Spectrum random_spectrum(Rng& rng, int n, double lo, double hi) {
    std::vector<double> v(static_cast<size_t>(n));
    for (double& x : v) x = rng.next_uniform(lo, hi);
    return Spectrum(std::move(v));
}

// y dominates x entrywise, so x prec_{w(log)} y holds by construction
std::pair<Spectrum, Spectrum> dominated_pair(Rng& rng, int n) {
    std::vector<double> x, y;
    for (int i = 0; i < n; ++i) {
        const double top = rng.next_uniform(0.2, 3.0);
        y.push_back(top);
        x.push_back(top * std::exp(-rng.next_uniform(0.0, 0.8)));
    }
    return {Spectrum(std::move(x)), Spectrum(std::move(y))};
}

} // namespace

TEST_CASE("powers q >= 1 preserve log-submajorisation") {
    Rng rng(555);
    int preserved = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto [x, y] = dominated_pair(rng, 4);
        REQUIRE(log_submajorize(x, y).holds);
        for (double q : {1.0, 1.5, 2.0, 3.0}) {
            const Spectrum xq = x.map([q](double v) { return std::pow(v, q); });
            const Spectrum yq = y.map([q](double v) { return std::pow(v, q); });
            CHECK(log_submajorize(xq, yq, 2e-9).holds);
        }
        ++preserved;
    }
    // pairs from the fractional-power inequality itself, which hold without
    // entrywise dominance
    for (std::uint64_t trial = 0; trial < 40; ++trial) {
        Rng mrng(derive_seed(414, 3, trial));
        const PsdMatrix a = random_psd(3, 0.2, 2.5, mrng);
        const PsdMatrix b = random_psd(3, 0.2, 2.5, mrng);
        const ScalarFunction half = builtin("power", {0.5});
        const Spectrum x = product_spectrum(matrix_function(a, half), matrix_function(b, half));
        const Spectrum y = product_spectrum(a, b).map([](double v) { return std::sqrt(v); });
        REQUIRE(log_submajorize(x, y).holds);
        for (double q : {1.5, 2.0, 3.0}) {
            const Spectrum xq = x.map([q](double v) { return std::pow(v, q); });
            const Spectrum yq = y.map([q](double v) { return std::pow(v, q); });
            CHECK(log_submajorize(xq, yq, 2e-9).holds);
        }
        ++preserved;
    }
    CHECK(preserved == 100);
}

TEST_CASE("log-submajorisation is transitive") {
    Rng rng(808);
    for (int trial = 0; trial < 100; ++trial) {
        const auto [x, y] = dominated_pair(rng, 5);
        const Spectrum z = y.map([&rng](double v) { return v * std::exp(rng.next_uniform(0.0, 0.5)); });
        const MajorizationReport xy = log_submajorize(x, y);
        const MajorizationReport yz = log_submajorize(y, z);
        REQUIRE(xy.holds);
        REQUIRE(yz.holds);
        CHECK(log_submajorize(x, z, 2e-9).holds);
    }
}

TEST_CASE("log_submajorize agrees with weak majorisation of the logarithms") {
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const Spectrum x = random_spectrum(rng, 4, 0.05, 3.0);
        const Spectrum y = random_spectrum(rng, 4, 0.05, 3.0);
        const Spectrum lx = x.map([](double v) { return std::log(v); });
        const Spectrum ly = y.map([](double v) { return std::log(v); });
        CHECK(log_submajorize(x, y).holds == weak_majorize(lx, ly).holds);
    }
}
