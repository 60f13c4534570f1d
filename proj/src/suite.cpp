#include "logmaj/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <set>

#include "logmaj/rng.hpp"
#include "logmaj/version.hpp"

namespace logmaj {

namespace {

const std::set<std::string> kPairChecks = {"alt", "falt", "ralt", "minlemma", "convex-closure",
                                           "gt", "lidskii"};
const std::set<std::string> kQuadChecks = {"u1", "u2", "u3"};

void validate(const SuiteConfig& cfg) {
    if (!kPairChecks.count(cfg.check) && !kQuadChecks.count(cfg.check)) {
        throw Error("unknown check '" + cfg.check + "'");
    }
    if (cfg.trials < 1) throw Error("trials must be >= 1");
    if (cfg.dims.empty()) throw Error("at least one dimension required");
    for (int d : cfg.dims) {
        if (d < 1 || d > 16) throw Error("dims must lie in [1, 16]");
    }
    if (!(cfg.tolerance > 0.0)) throw Error("tolerance must be positive");
    if (!(cfg.lo >= 0.0 && cfg.lo <= cfg.hi)) throw Error("invalid interval: need 0 <= lo <= hi");
    if ((cfg.check == "alt" || cfg.check == "lidskii") && !(cfg.lo > 0.0)) {
        throw Error("check '" + cfg.check + "' needs positive definite inputs: interval lo must be > 0");
    }
    const size_t needed = cfg.check == "falt" || cfg.check == "ralt" ? 1
                          : cfg.check == "convex-closure"            ? 2
                                                                     : 0;
    if (cfg.functions.size() < needed) {
        throw Error("check '" + cfg.check + "' needs " + std::to_string(needed) + " function(s)");
    }
    if (cfg.check == "alt" && cfg.t_values.empty()) throw Error("check 'alt' needs at least one t");
}

/// Lemma a1 at suite level: every sqrt(lambda_i) of a generated product must
/// stay inside the generating interval, up to 1e-9.
long containment_breaches(const Spectrum& prod, double lo, double hi) {
    long breaches = 0;
    for (double lambda : prod.values()) {
        const double r = std::sqrt(std::max(lambda, 0.0));
        if (r < lo - 1e-9 || r > hi + 1e-9) ++breaches;
    }
    return breaches;
}

nlohmann::json echo_config(const SuiteConfig& cfg) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& f : cfg.functions) labels.push_back(f.label());
    nlohmann::json j{{"check", cfg.check},
                     {"dims", cfg.dims},
                     {"trials", cfg.trials},
                     {"seed", cfg.master_seed},
                     {"interval", {cfg.lo, cfg.hi}},
                     {"tolerance", cfg.tolerance},
                     {"functions", labels}};
    if (cfg.check == "alt") j["t_values"] = cfg.t_values;
    if (cfg.check == "convex-closure") j["p"] = cfg.p;
    return j;
}

} // namespace

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
    validate(cfg);

    SuiteResult result;
    result.config_echo = echo_config(cfg);

    auto record = [&](const CheckOutcome& outcome, int dim, std::uint64_t trial, std::uint64_t seed) {
        ++result.total;
        if (outcome.verdict == "premise-failed") {
            ++result.skips;
        } else if (outcome.holds) {
            ++result.passes;
        } else {
            ++result.violations;
            if (result.violation_details.size() < 25) {
                CheckOutcome full = outcome;
                full.inputs_digest = "seed=" + std::to_string(seed) + ";trial=" + std::to_string(trial) +
                                     ";" + outcome.inputs_digest;
                result.violation_details.push_back(full.to_json());
            }
        }
        if (outcome.verdict != "premise-failed" && outcome.margin < result.min_margin) {
            result.min_margin = outcome.margin;
            result.worst_seed = seed;
            result.worst_dim = dim;
            result.worst_trial = trial;
            result.worst_name = outcome.name;
        }
        if (cfg.include_trial_rows) {
            result.rows.push_back(
                {dim, trial, seed, outcome.name, outcome.verdict, outcome.margin});
        }
    };

    for (int dim : cfg.dims) {
        for (std::uint64_t trial = 0; trial < static_cast<std::uint64_t>(cfg.trials); ++trial) {
            const std::uint64_t seed =
                derive_seed(cfg.master_seed, static_cast<std::uint64_t>(dim), trial);

            if (kPairChecks.count(cfg.check)) {
                Rng rng(seed);
                const PsdMatrix a = random_psd(dim, cfg.lo, cfg.hi, rng);
                const PsdMatrix b = random_psd(dim, cfg.lo, cfg.hi, rng);
                result.containment_breaches +=
                    containment_breaches(product_spectrum(a, b), cfg.lo, cfg.hi);

                if (cfg.check == "alt") {
                    for (double t : cfg.t_values) {
                        record(check_alt_classic(a, b, t, AltDirection::Auto, cfg.tolerance), dim,
                               trial, seed);
                    }
                } else if (cfg.check == "falt") {
                    record(check_falt(a, b, cfg.functions[0], cfg.tolerance), dim, trial, seed);
                } else if (cfg.check == "ralt") {
                    record(check_ralt(a, b, cfg.functions[0], cfg.tolerance), dim, trial, seed);
                } else if (cfg.check == "minlemma") {
                    record(check_min_lemma(a, b, cfg.tolerance), dim, trial, seed);
                } else if (cfg.check == "convex-closure") {
                    record(check_prop_convex(a, b, cfg.functions[0], cfg.functions[1], cfg.p,
                                             cfg.tolerance),
                           dim, trial, seed);
                } else if (cfg.check == "gt") {
                    record(check_gt_complement(a, b, cfg.tolerance), dim, trial, seed);
                } else if (cfg.check == "lidskii") {
                    for (int k = 1; k <= dim; ++k) {
                        record(check_lidskii(a, b, k, cfg.tolerance), dim, trial, seed);
                    }
                }
            } else {
                const CommutingQuadruple q = random_commuting_quadruple(dim, cfg.lo, cfg.hi, seed);
                result.containment_breaches +=
                    containment_breaches(product_spectrum(q.r1, q.s1), cfg.lo, cfg.hi);
                result.containment_breaches +=
                    containment_breaches(product_spectrum(q.s2, q.r2), cfg.lo, cfg.hi);

                if (cfg.check == "u1") {
                    record(check_lemma_u1(q, cfg.tolerance), dim, trial, seed);
                } else if (cfg.check == "u2") {
                    for (int k = 1; k <= dim; ++k) {
                        record(check_prop_u2(q, k, cfg.tolerance), dim, trial, seed);
                    }
                } else if (cfg.check == "u3") {
                    record(check_prop_u3(q, default_p_grid(), cfg.tolerance), dim, trial, seed);
                }
            }
        }
    }
    return result;
}

nlohmann::json SuiteResult::to_json(bool with_timestamp) const {
    nlohmann::json j;
    j["toolkit_version"] = LOGMAJ_VERSION;
    if (with_timestamp) j["timestamp"] = iso8601_utc_now();
    j["config"] = config_echo;
    j["summary"] = nlohmann::json{{"total", total},
                                  {"passes", passes},
                                  {"violations", violations},
                                  {"skips", skips},
                                  {"min_margin", min_margin},
                                  {"worst_seed", worst_seed},
                                  {"worst_dim", worst_dim},
                                  {"worst_trial", worst_trial},
                                  {"worst_name", worst_name},
                                  {"containment_breaches", containment_breaches}};
    if (!rows.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const TrialRow& r : rows) {
            arr.push_back(nlohmann::json{{"dim", r.dim},
                                         {"trial", r.trial},
                                         {"seed", r.seed},
                                         {"name", r.name},
                                         {"verdict", r.verdict},
                                         {"margin", r.margin}});
        }
        j["trials"] = std::move(arr);
    }
    j["violations"] = violation_details;
    return j;
}

std::string SuiteResult::to_csv() const {
    std::string out = "dim,trial,seed,name,verdict,margin\n";
    char buf[256];
    for (const TrialRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%llu,%llu,%s,%s,%.17g\n", r.dim,
                      static_cast<unsigned long long>(r.trial),
                      static_cast<unsigned long long>(r.seed), r.name.c_str(), r.verdict.c_str(),
                      r.margin);
        out += buf;
    }
    return out;
}

std::string SuiteResult::summary_line() const {
    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "total=%ld passes=%ld violations=%ld skips=%ld min_margin=%.3e "
                  "worst_seed=%llu worst_dim=%d containment_breaches=%ld",
                  total, passes, violations, skips, min_margin,
                  static_cast<unsigned long long>(worst_seed), worst_dim, containment_breaches);
    return buf;
}

} // namespace logmaj
