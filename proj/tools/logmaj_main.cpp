#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "logmaj/funcparse.hpp"
#include "logmaj/probe.hpp"
#include "logmaj/suite.hpp"
#include "logmaj/version.hpp"

namespace {

using namespace logmaj;

constexpr const char* kGrammarHelp =
    "Function grammar: precedence (lowest to highest) add/sub, mul/div, unary minus,\n"
    "'^' (right-associative, so -x^2 = -(x^2)), calls/parens. Variable: x. Calls:\n"
    "exp, log, sqrt (1 arg), min, max (2 args). Numbers: decimal with optional exponent.";

std::pair<double, double> parse_interval(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error("interval must be LO:HI, got '" + text + "'");
    try {
        const double lo = std::stod(text.substr(0, colon));
        const double hi = std::stod(text.substr(colon + 1));
        return {lo, hi};
    } catch (const std::exception&) {
        throw Error("interval must be LO:HI with numeric bounds, got '" + text + "'");
    }
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error("cannot open output file '" + out_path + "'");
    f << text;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

ScalarFunction parse_cli_function(const std::string& expr) {
    try {
        return parse_function(expr);
    } catch (const ParseError& e) {
        std::string expected;
        for (const auto& t : e.expected) {
            if (!expected.empty()) expected += ", ";
            expected += t;
        }
        std::cerr << "error: " << e.what() << "\n  in: " << expr << "\n      "
                  << std::string(e.offset, ' ') << "^\n  expected: " << expected << "\n";
        throw;
    }
}

int run_classify(const std::string& expr, const std::string& interval, int grid, double tol,
                 const std::string& out, bool no_timestamp) {
    const ScalarFunction f = parse_cli_function(expr);
    const auto [lo, hi] = parse_interval(interval);
    const ClassReport report = classify(f, lo, hi, grid);

    nlohmann::json j;
    j["toolkit_version"] = LOGMAJ_VERSION;
    if (!no_timestamp) j["timestamp"] = iso8601_utc_now();
    j["config"] = {{"command", "classify"}, {"function", expr}, {"interval", {lo, hi}},
                   {"grid_size", grid},     {"tolerance", tol}};
    j["result"] = report.to_json();
    emit(json_text(j), out);
    return 0; // classification completing is success regardless of verdict
}

int run_verify(const std::string& check, const std::vector<std::string>& exprs,
               std::vector<int> dims, int trials, std::uint64_t seed, const std::string& interval,
               double tol, std::vector<double> t_values, double p, const std::string& matrix_a,
               const std::string& matrix_b, const std::string& out, const std::string& format,
               bool no_timestamp) {
    const auto [lo, hi] = parse_interval(interval);

    std::vector<ScalarFunction> functions;
    for (const auto& e : exprs) functions.push_back(parse_cli_function(e));

    if (!matrix_a.empty() || !matrix_b.empty()) {
        if (matrix_a.empty() || matrix_b.empty()) {
            throw Error("matrix file mode needs both --matrix-a and --matrix-b");
        }
        if (check == "u1" || check == "u2" || check == "u3") {
            throw Error("matrix file mode supports pair checks only");
        }
        auto load = [](const std::string& path) {
            std::ifstream f(path);
            if (!f) throw Error("cannot open matrix file '" + path + "'");
            nlohmann::json j;
            try {
                f >> j;
                return PsdMatrix::from_json(j);
            } catch (const nlohmann::json::exception& e) {
                throw Error("matrix file '" + path + "' is not a valid matrix object: " + e.what());
            }
        };
        const PsdMatrix a = load(matrix_a);
        const PsdMatrix b = load(matrix_b);

        std::vector<CheckOutcome> outcomes;
        if (check == "alt") {
            for (double t : t_values) outcomes.push_back(check_alt_classic(a, b, t, AltDirection::Auto, tol));
        } else if (check == "falt") {
            if (functions.empty()) throw Error("--check falt needs --function");
            outcomes.push_back(check_falt(a, b, functions[0], tol));
        } else if (check == "ralt") {
            if (functions.empty()) throw Error("--check ralt needs --function");
            outcomes.push_back(check_ralt(a, b, functions[0], tol));
        } else if (check == "minlemma") {
            outcomes.push_back(check_min_lemma(a, b, tol));
        } else if (check == "gt") {
            outcomes.push_back(check_gt_complement(a, b, tol));
        } else if (check == "lidskii") {
            for (int k = 1; k <= a.dim(); ++k) outcomes.push_back(check_lidskii(a, b, k, tol));
        } else if (check == "convex-closure") {
            if (functions.size() < 2) throw Error("--check convex-closure needs two --function");
            outcomes.push_back(check_prop_convex(a, b, functions[0], functions[1], p, tol));
        } else {
            throw Error("unknown check '" + check + "'");
        }

        nlohmann::json j;
        j["toolkit_version"] = LOGMAJ_VERSION;
        if (!no_timestamp) j["timestamp"] = iso8601_utc_now();
        j["config"] = {{"command", "verify"},  {"check", check},         {"matrix_a", matrix_a},
                       {"matrix_b", matrix_b}, {"tolerance", tol}};
        bool all_hold = true;
        j["outcomes"] = nlohmann::json::array();
        for (const auto& o : outcomes) {
            all_hold = all_hold && o.holds;
            j["outcomes"].push_back(o.to_json());
        }
        emit(json_text(j), out);
        return all_hold ? 0 : 1;
    }

    SuiteConfig cfg;
    cfg.check = check;
    cfg.dims = std::move(dims);
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.lo = lo;
    cfg.hi = hi;
    cfg.tolerance = tol;
    cfg.functions = std::move(functions);
    cfg.t_values = std::move(t_values);
    cfg.p = p;

    const SuiteResult result = run_suite(cfg);
    if (format == "csv") {
        emit(result.to_csv(), out);
    } else {
        emit(json_text(result.to_json(!no_timestamp)), out);
    }
    std::cerr << "verify " << check << ": " << result.summary_line() << "\n";
    return result.all_hold() ? 0 : 1;
}

int run_falsify(const std::string& expr, const std::string& target_str, const std::string& interval,
                std::vector<double> thetas, double tol, const std::string& out, bool no_timestamp) {
    const ScalarFunction f = parse_cli_function(expr);
    if (target_str != "eq4" && target_str != "eq5") throw Error("--target must be eq4 or eq5");
    const ProbeTarget target = target_str == "eq4" ? ProbeTarget::Eq4 : ProbeTarget::Eq5;
    const auto [lo, hi] = parse_interval(interval);

    ProbeGrid grid;
    grid.lo = lo;
    grid.hi = hi;
    const ProbeResult result =
        search_counterexample(f, target, grid, thetas.empty() ? default_thetas() : thetas, tol);

    nlohmann::json j;
    j["toolkit_version"] = LOGMAJ_VERSION;
    if (!no_timestamp) j["timestamp"] = iso8601_utc_now();
    j["config"] = {{"command", "falsify"}, {"function", expr}, {"target", target_str},
                   {"interval", {lo, hi}}, {"thetas", thetas}, {"tolerance", tol}};
    j["result"] = result.to_json();
    emit(json_text(j), out);
    return result.witness ? 0 : 3;
}

int run_sweep(const std::string& expr, double a, double b, const std::vector<double>& thetas,
              const std::string& out) {
    const ScalarFunction f = parse_cli_function(expr);
    const std::vector<SweepRow> rows = theta_sweep(f, a, b, thetas);
    emit(sweep_csv(rows), out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("logmaj ") + LOGMAJ_VERSION +
                 " - numerical verification of eigenvalue log-majorisation inequalities\n\n" +
                 kGrammarHelp};
    app.require_subcommand(1);

    std::string function_single, interval = "0.1:3.0", out_path, format = "json";
    std::vector<std::string> functions;
    std::string check, target = "eq4", matrix_a, matrix_b;
    std::vector<int> dims = {2, 3, 4};
    std::vector<double> t_values = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
    std::vector<double> thetas = {0.2, 0.1, 0.05, 0.02};
    int trials = 100, grid_size = 33;
    std::uint64_t seed = 1;
    double tol = 1e-9, p = 0.5, probe_a = 2.0, probe_b = 0.0;
    bool no_timestamp = false;

    auto* classify_cmd = app.add_subcommand("classify", "classify a scalar function (shape, classes A/B)");
    classify_cmd->add_option("--function", function_single, "expression in x")->required();
    classify_cmd->add_option("--interval", interval, "probe interval LO:HI (0 < LO)");
    classify_cmd->add_option("--grid", grid_size, "log-uniform grid size (>= 3)");
    classify_cmd->add_option("--tol", tol, "tolerance echoed into the report");
    classify_cmd->add_option("--out", out_path, "output file (default stdout)");
    classify_cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");

    auto* verify_cmd = app.add_subcommand("verify", "run a randomized verification suite");
    verify_cmd
        ->add_option("--check", check,
                     "one of: alt, falt, ralt, u1, u2, u3, minlemma, convex-closure, gt, lidskii")
        ->required();
    verify_cmd->add_option("--function", functions, "expression in x (repeat for convex-closure)");
    verify_cmd->add_option("--dims", dims, "matrix dimensions")->delimiter(',');
    verify_cmd->add_option("--trials", trials, "trials per dimension");
    verify_cmd->add_option("--seed", seed, "master seed");
    verify_cmd->add_option("--interval", interval, "eigenvalue interval LO:HI");
    verify_cmd->add_option("--tol", tol, "majorisation tolerance");
    verify_cmd->add_option("--t", t_values, "t exponents for --check alt")->delimiter(',');
    verify_cmd->add_option("--p", p, "geometric-mean weight for convex-closure");
    verify_cmd->add_option("--matrix-a", matrix_a, "JSON matrix file: run the check on this pair");
    verify_cmd->add_option("--matrix-b", matrix_b, "JSON matrix file");
    verify_cmd->add_option("--out", out_path, "output file (default stdout)");
    verify_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    verify_cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");

    auto* falsify_cmd = app.add_subcommand("falsify", "search the 2x2 rotation family for a counterexample");
    falsify_cmd->add_option("--function", function_single, "expression in x")->required();
    falsify_cmd->add_option("--target", target, "eq4 (concave direction) or eq5 (convex direction)");
    falsify_cmd->add_option("--interval", interval, "a-grid interval LO:HI");
    falsify_cmd->add_option("--thetas", thetas, "finite-theta confirmation angles")->delimiter(',');
    falsify_cmd->add_option("--tol", tol, "tolerance");
    falsify_cmd->add_option("--out", out_path, "output file (default stdout)");
    falsify_cmd->add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");

    auto* sweep_cmd = app.add_subcommand("sweep", "finite-theta margin table as CSV");
    sweep_cmd->add_option("--function", function_single, "expression in x")->required();
    sweep_cmd->add_option("--a", probe_a, "larger eigenvalue a > b")->required();
    sweep_cmd->add_option("--b", probe_b, "smaller eigenvalue b >= 0");
    sweep_cmd->add_option("--thetas", thetas, "angles in (0, pi/4]")->delimiter(',');
    sweep_cmd->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (classify_cmd->parsed()) {
            return run_classify(function_single, interval, grid_size, tol, out_path, no_timestamp);
        }
        if (verify_cmd->parsed()) {
            // default interval for classify differs from verify; keep the flag value as given
            if (verify_cmd->count("--interval") == 0) interval = "0.1:2.5";
            return run_verify(check, functions, dims, trials, seed, interval, tol, t_values, p,
                              matrix_a, matrix_b, out_path, format, no_timestamp);
        }
        if (falsify_cmd->parsed()) {
            if (falsify_cmd->count("--interval") == 0) interval = "0.25:4.0";
            return run_falsify(function_single, target, interval, thetas, tol, out_path, no_timestamp);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(function_single, probe_a, probe_b, thetas, out_path);
        }
    } catch (const ParseError&) {
        return 2; // diagnostics already printed
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
