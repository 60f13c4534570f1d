#pragma once

#include <optional>
#include <utility>

#include <json.hpp>

#include "logmaj/funclass.hpp"
#include "logmaj/linalg.hpp"

namespace logmaj {

/// 2x2 rotation-family probe point: A = diag(a, b) and B the same diagonal
/// conjugated by the rotation through theta.
struct ProbeConfig {
    double a = 0.0;
    double b = 0.0;
    double theta = 0.0;
};

enum class ProbeTarget { Eq4, Eq5 };

std::string target_name(ProbeTarget t);

struct ProbeWitness {
    ProbeConfig config;
    double margin = 0.0; // direct violation margin at finite theta (negative)
    PsdMatrix mat_a;
    PsdMatrix mat_b;
};

struct ProbeResult {
    double lhs_coeff = 0.0; // quadratic coefficient of lambda_1(f(A)f(B))
    double rhs_coeff = 0.0; // quadratic coefficient of f^2(sqrt(lambda_1(AB)))
    bool necessity_holds = false;
    std::optional<ProbeWitness> witness;
    std::vector<std::string> skipped_cells;

    nlohmann::json to_json() const;
};

std::pair<PsdMatrix, PsdMatrix> build_pair(const ProbeConfig& cfg);

/// Second-order expansion of both sides around theta = 0:
///   rhs_coeff = a (a - b) f(a) f'(a) / (a + b)
///   lhs_coeff = f(a)^2 (f(a) - f(b)) / (f(a) + f(b))
/// For Eq4 the necessity condition is rhs_coeff <= lhs_coeff; for Eq5 it is
/// reversed. At kinks the worse one-sided derivative for the target is used.
ProbeResult expansion_coefficients(const ScalarFunction& f, double a, double b,
                                   ProbeTarget target = ProbeTarget::Eq4, double tol = 1e-9);

struct SweepRow {
    double theta = 0.0;
    double lhs = 0.0;    // lambda_1(f(A) f(B))
    double rhs = 0.0;    // f^2(sqrt(lambda_1(AB)))
    double margin = 0.0; // rhs - lhs
};

/// Finite-theta evaluation via closed-form 2x2 eigenvalues, cross-checked
/// against the iterative eigensolver to 1e-12.
std::vector<SweepRow> theta_sweep(const ScalarFunction& f, double a, double b,
                                  const std::vector<double>& thetas);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct ProbeGrid {
    double lo = 0.25;
    double hi = 4.0;
    int a_points = 12;                                   // log-spaced
    std::vector<double> b_fractions = {0.0, 0.25, 0.5, 0.75}; // b = fraction * a
};

std::vector<double> default_thetas();

/// Scans the (a, b) grid for a necessity violation and confirms candidates
/// at finite theta. The returned witness is the lexicographically first one
/// in (a, b, theta) grid order whose direct margin is below -10x tolerance.
ProbeResult search_counterexample(const ScalarFunction& f, ProbeTarget target, const ProbeGrid& grid,
                                  const std::vector<double>& thetas = default_thetas(),
                                  double tol = 1e-9);

} // namespace logmaj
