#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logmaj/suite.hpp"
#include "logmaj/version.hpp"

using namespace logmaj;

namespace {

SuiteConfig base_config(const std::string& check) {
    SuiteConfig cfg;
    cfg.check = check;
    cfg.dims = {2, 3};
    cfg.trials = 10;
    cfg.master_seed = 2024;
    return cfg;
}

} // namespace

TEST_CASE("falt suite passes for a class-A function and reproduces its worst trial") {
    SuiteConfig cfg = base_config("falt");
    cfg.functions.push_back(builtin("min_clip", {1.0}));
    const SuiteResult result = run_suite(cfg);

    CHECK(result.total == 20);
    CHECK(result.passes == 20);
    CHECK(result.violations == 0);
    CHECK(result.containment_breaches == 0);
    CHECK(result.all_hold());

    // the reported worst seed reproduces the reported worst margin
    Rng rng(result.worst_seed);
    const PsdMatrix a = random_psd(result.worst_dim, cfg.lo, cfg.hi, rng);
    const PsdMatrix b = random_psd(result.worst_dim, cfg.lo, cfg.hi, rng);
    const CheckOutcome again = check_falt(a, b, cfg.functions[0], cfg.tolerance);
    CHECK(again.margin == result.min_margin);
}

TEST_CASE("alt suite runs the whole t grid per trial") {
    SuiteConfig cfg = base_config("alt");
    cfg.t_values = {0.5, 1.0, 2.0};
    const SuiteResult result = run_suite(cfg);
    CHECK(result.total == 2 * 10 * 3);
    CHECK(result.violations == 0);
}

TEST_CASE("quadruple suites run and hold") {
    for (const char* check : {"u1", "u2", "u3"}) {
        SuiteConfig cfg = base_config(check);
        cfg.trials = 5;
        const SuiteResult result = run_suite(cfg);
        CHECK_MESSAGE(result.violations == 0, check);
        CHECK(result.total > 0);
    }
}

TEST_CASE("suite accounting identity holds for the conditional check") {
    SuiteConfig cfg = base_config("convex-closure");
    cfg.functions.push_back(builtin("min_clip", {1.0}));
    cfg.functions.push_back(builtin("identity"));
    const SuiteResult result = run_suite(cfg);
    CHECK(result.total == result.passes + result.violations + result.skips);
    CHECK(result.violations == 0);
}

TEST_CASE("suite config validation") {
    CHECK_THROWS_AS(run_suite(base_config("nonsense")), Error);

    SuiteConfig no_fn = base_config("falt");
    CHECK_THROWS_AS(run_suite(no_fn), Error);

    SuiteConfig bad_trials = base_config("gt");
    bad_trials.trials = 0;
    CHECK_THROWS_AS(run_suite(bad_trials), Error);

    SuiteConfig bad_dim = base_config("gt");
    bad_dim.dims = {17};
    CHECK_THROWS_AS(run_suite(bad_dim), Error);

    SuiteConfig singular_alt = base_config("alt");
    singular_alt.lo = 0.0;
    CHECK_THROWS_AS(run_suite(singular_alt), Error);

    SuiteConfig bad_tol = base_config("gt");
    bad_tol.tolerance = 0.0;
    CHECK_THROWS_AS(run_suite(bad_tol), Error);
}

TEST_CASE("reports are deterministic and the timestamp is isolatable") {
    SuiteConfig cfg = base_config("gt");
    const SuiteResult first = run_suite(cfg);
    const SuiteResult second = run_suite(cfg);
    CHECK(first.to_json(false).dump(2) == second.to_json(false).dump(2));
    CHECK(first.to_csv() == second.to_csv());

    CHECK_FALSE(first.to_json(false).contains("timestamp"));
    CHECK(first.to_json(true).contains("timestamp"));
    CHECK(first.to_json(false).at("toolkit_version").get<std::string>() == LOGMAJ_VERSION);
    CHECK(first.to_json(false).at("config").at("tolerance").get<double>() == cfg.tolerance);
}

TEST_CASE("csv rows carry the documented header") {
    SuiteConfig cfg = base_config("minlemma");
    cfg.trials = 3;
    const std::string csv = run_suite(cfg).to_csv();
    CHECK(csv.rfind("dim,trial,seed,name,verdict,margin\n", 0) == 0);
}

TEST_CASE("derived trial seeds are stable under adding dims and trials") {
    SuiteConfig small = base_config("gt");
    small.include_trial_rows = true;
    SuiteConfig large = small;
    large.dims = {2, 3, 4};
    large.trials = 20;

    const SuiteResult a = run_suite(small);
    const SuiteResult b = run_suite(large);
    for (const TrialRow& row : a.rows) {
        bool found = false;
        for (const TrialRow& other : b.rows) {
            if (other.dim == row.dim && other.trial == row.trial) {
                CHECK(other.seed == row.seed);
                CHECK(other.margin == row.margin);
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}
