#include "logmaj/probe.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace logmaj {

namespace {

/// Top eigenvalue of the 2x2 product diag(u1,u2) * U diag(u1,u2) U^T from
/// trace and determinant.
double top_product_eigenvalue(double u1, double u2, double theta) {
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double tr = (u1 * u1 + u2 * u2) * c2 + 2.0 * u1 * u2 * s2;
    const double det = u1 * u1 * u2 * u2;
    const double disc = std::max(tr * tr - 4.0 * det, 0.0);
    return 0.5 * (tr + std::sqrt(disc));
}

void cross_check(double closed_form, double iterative, const char* what) {
    const double tol = 1e-12 * std::max(1.0, std::abs(closed_form));
    if (std::abs(closed_form - iterative) > tol) {
        throw Error(std::string("theta_sweep: closed-form and eigensolver paths disagree on ") +
                    what + ": " + std::to_string(closed_form) + " vs " + std::to_string(iterative));
    }
}

} // namespace

std::string target_name(ProbeTarget t) { return t == ProbeTarget::Eq4 ? "eq4" : "eq5"; }

nlohmann::json ProbeResult::to_json() const {
    nlohmann::json j{{"lhs_coeff", lhs_coeff},
                     {"rhs_coeff", rhs_coeff},
                     {"necessity_holds", necessity_holds},
                     {"skipped_cells", skipped_cells}};
    if (witness) {
        j["witness"] = nlohmann::json{{"a", witness->config.a},
                                      {"b", witness->config.b},
                                      {"theta", witness->config.theta},
                                      {"margin", witness->margin},
                                      {"matrix_a", witness->mat_a.to_json()},
                                      {"matrix_b", witness->mat_b.to_json()}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

std::pair<PsdMatrix, PsdMatrix> build_pair(const ProbeConfig& cfg) {
    if (!(cfg.b >= 0.0 && cfg.b < cfg.a)) throw Error("probe needs 0 <= b < a");
    Matrix eye = Matrix::identity(2);
    PsdMatrix mat_a = PsdMatrix::from_eigensystem(eye, {cfg.a, cfg.b});

    Matrix u(2);
    u(0, 0) = std::cos(cfg.theta);
    u(0, 1) = -std::sin(cfg.theta);
    u(1, 0) = std::sin(cfg.theta);
    u(1, 1) = std::cos(cfg.theta);
    PsdMatrix mat_b = PsdMatrix::from_eigensystem(u, {cfg.a, cfg.b});
    return {std::move(mat_a), std::move(mat_b)};
}

ProbeResult expansion_coefficients(const ScalarFunction& f, double a, double b, ProbeTarget target,
                                   double tol) {
    if (!(b >= 0.0 && b < a)) throw Error("expansion_coefficients needs 0 <= b < a");
    if (!f.in_domain(a) || !f.in_domain(b)) throw Error("expansion_coefficients: (a, b) outside dom(f)");

    const double fa = f(a);
    const double fb = f(b);
    if (fa + fb <= 0.0) {
        throw Error("expansion_coefficients: degenerate cell, f(a) = f(b) = 0");
    }

    const DerivSides sides = f.derivative_sides(a);
    double da = sides.left;
    if (sides.kink) {
        // the side more likely to violate the target condition
        da = target == ProbeTarget::Eq4 ? std::max(sides.left, sides.right)
                                        : std::min(sides.left, sides.right);
    }

    ProbeResult result;
    result.rhs_coeff = a * (a - b) * fa * da / (a + b);
    result.lhs_coeff = fa * fa * (fa - fb) / (fa + fb);
    const double band = tol * std::max({1.0, std::abs(result.lhs_coeff), std::abs(result.rhs_coeff)});
    result.necessity_holds = target == ProbeTarget::Eq4
                                 ? result.rhs_coeff <= result.lhs_coeff + band
                                 : result.rhs_coeff >= result.lhs_coeff - band;
    return result;
}

std::vector<SweepRow> theta_sweep(const ScalarFunction& f, double a, double b,
                                  const std::vector<double>& thetas) {
    if (!(b >= 0.0 && b < a)) throw Error("theta_sweep needs 0 <= b < a");
    const double fa = f(a);
    const double fb = f(b);

    std::vector<SweepRow> rows;
    rows.reserve(thetas.size());
    for (double theta : thetas) {
        if (!(theta > 0.0 && theta <= 0.25 * 3.14159265358979323846 + 1e-12)) {
            throw Error("theta_sweep: theta must lie in (0, pi/4]");
        }
        const double lam1 = top_product_eigenvalue(a, b, theta);
        const double root = std::min(std::sqrt(lam1), a); // containment: sqrt(lambda_1) <= a
        const double fr = f(root);
        const double rhs = fr * fr;
        const double lhs = top_product_eigenvalue(fa, fb, theta);

        // independent route through the eigensolver
        const auto [mat_a, mat_b] = build_pair({a, b, theta});
        cross_check(lam1, product_spectrum(mat_a, mat_b).max(), "lambda_1(AB)");
        cross_check(lhs,
                    product_spectrum(matrix_function(mat_a, f), matrix_function(mat_b, f)).max(),
                    "lambda_1(f(A)f(B))");

        rows.push_back({theta, lhs, rhs, rhs - lhs});
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "theta,lhs,rhs,margin\n";
    char buf[160];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", r.theta, r.lhs, r.rhs, r.margin);
        out += buf;
    }
    return out;
}

std::vector<double> default_thetas() { return {0.2, 0.1, 0.05, 0.02}; }

ProbeResult search_counterexample(const ScalarFunction& f, ProbeTarget target, const ProbeGrid& grid,
                                  const std::vector<double>& thetas, double tol) {
    if (grid.a_points < 1 || !(grid.lo > 0.0 && grid.lo < grid.hi)) {
        throw Error("search_counterexample: empty or invalid grid");
    }
    if (grid.hi >= f.domain_end()) throw Error("search_counterexample: grid outside dom(f)");

    std::vector<double> a_values;
    const double ylo = std::log(grid.lo), yhi = std::log(grid.hi);
    for (int i = 0; i < grid.a_points; ++i) {
        const double frac = grid.a_points == 1 ? 0.0 : static_cast<double>(i) / (grid.a_points - 1);
        a_values.push_back(std::exp(ylo + (yhi - ylo) * frac));
    }

    ProbeResult best;
    best.necessity_holds = true;
    double best_slack = std::numeric_limits<double>::infinity();

    for (double a : a_values) {
        for (double frac : grid.b_fractions) {
            const double b = frac * a;
            ProbeResult cell;
            try {
                cell = expansion_coefficients(f, a, b, target, tol);
            } catch (const Error& e) {
                best.skipped_cells.push_back("a=" + std::to_string(a) + ",b=" + std::to_string(b) +
                                             ": " + e.what());
                continue;
            }
            const double slack = target == ProbeTarget::Eq4 ? cell.lhs_coeff - cell.rhs_coeff
                                                            : cell.rhs_coeff - cell.lhs_coeff;
            if (slack < best_slack) {
                best_slack = slack;
                best.lhs_coeff = cell.lhs_coeff;
                best.rhs_coeff = cell.rhs_coeff;
            }
            best.necessity_holds = best.necessity_holds && cell.necessity_holds;
            if (cell.necessity_holds) continue;

            // candidate cell: confirm at finite theta
            for (double theta : thetas) {
                std::vector<SweepRow> row;
                try {
                    row = theta_sweep(f, a, b, {theta});
                } catch (const Error& e) {
                    best.skipped_cells.push_back("a=" + std::to_string(a) + ",b=" + std::to_string(b) +
                                                 ",theta=" + std::to_string(theta) + ": " + e.what());
                    continue;
                }
                const double direct =
                    target == ProbeTarget::Eq4 ? row[0].margin : -row[0].margin;
                const double scale = std::max({1.0, std::abs(row[0].lhs), std::abs(row[0].rhs)});
                if (direct < -10.0 * tol * scale) {
                    ProbeResult found = cell;
                    found.skipped_cells = best.skipped_cells;
                    auto [mat_a, mat_b] = build_pair({a, b, theta});
                    found.witness =
                        ProbeWitness{{a, b, theta}, direct, std::move(mat_a), std::move(mat_b)};
                    return found;
                }
            }
        }
    }
    return best;
}

} // namespace logmaj
