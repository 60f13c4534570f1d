#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "logmaj/checks.hpp"

namespace logmaj {

/// One randomized verification run: trials x dims seeded instances of a
/// named checker. Trial seeds derive from the master seed via derive_seed,
/// so results are reproducible from the report alone.
struct SuiteConfig {
    std::string check; // alt, falt, ralt, u1, u2, u3, minlemma, convex-closure, gt, lidskii
    std::vector<int> dims = {2, 3, 4};
    int trials = 100;
    std::uint64_t master_seed = 1;
    double lo = 0.1;
    double hi = 2.5;
    double tolerance = 1e-9;
    std::vector<ScalarFunction> functions;                         // falt/ralt: 1; convex-closure: 2
    std::vector<double> t_values = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0}; // alt only
    double p = 0.5;                                                // convex-closure only
    bool include_trial_rows = true;
};

struct TrialRow {
    int dim = 0;
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    std::string name;
    std::string verdict;
    double margin = 0.0;
};

struct SuiteResult {
    nlohmann::json config_echo;
    long total = 0;
    long passes = 0;
    long violations = 0;
    long skips = 0; // premise-failed outcomes, never counted as passes
    double min_margin = std::numeric_limits<double>::infinity();
    std::uint64_t worst_seed = 0;
    int worst_dim = 0;
    std::uint64_t worst_trial = 0;
    std::string worst_name;
    long containment_breaches = 0;
    std::vector<TrialRow> rows;
    std::vector<nlohmann::json> violation_details;

    bool all_hold() const { return violations == 0; }
    nlohmann::json to_json(bool with_timestamp) const;
    std::string to_csv() const;
    std::string summary_line() const;
};

SuiteResult run_suite(const SuiteConfig& cfg);

/// Current wall-clock time as ISO-8601 UTC; the only non-deterministic field
/// a report can carry.
std::string iso8601_utc_now();

} // namespace logmaj
