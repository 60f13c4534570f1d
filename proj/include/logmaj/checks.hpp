#pragma once

#include <json.hpp>

#include "logmaj/funclass.hpp"
#include "logmaj/linalg.hpp"
#include "logmaj/majorization.hpp"

namespace logmaj {

/// Result of one inequality check. margin is the minimum slack (log-domain
/// for majorisation comparisons, raw for scalar and per-index checks);
/// verdict is "holds", "violated" or, for the conditional closure check,
/// "premise-failed" (never counted as a pass).
struct CheckOutcome {
    std::string name;
    std::string verdict = "holds";
    bool holds = true;
    double margin = 0.0;
    double tolerance = 0.0;
    std::string inputs_digest;
    nlohmann::json detail;

    nlohmann::json to_json() const;
};

enum class AltDirection { Auto, Forward, Reversed };

/// lambda(A^t B^t) prec_{w(log)} lambda^t(AB) for t <= 1, reversed for
/// t >= 1. Auto picks the direction from t.
CheckOutcome check_alt_classic(const PsdMatrix& a, const PsdMatrix& b, double t,
                               AltDirection dir = AltDirection::Auto, double tol = 1e-9);

/// lambda(f(A) f(B)) prec_{w(log)} f^2(sqrt(lambda(AB))).
CheckOutcome check_falt(const PsdMatrix& a, const PsdMatrix& b, const ScalarFunction& f,
                        double tol = 1e-9);

/// g^2(sqrt(lambda(XY))) prec_{w(log)} lambda(g(X) g(Y)).
CheckOutcome check_ralt(const PsdMatrix& x, const PsdMatrix& y, const ScalarFunction& g,
                        double tol = 1e-9);

/// lambda_1((R^{1/2} S R^{1/2})^2) <= lambda_1(R1^{1/2}S1R1^{1/2} R2^{1/2}S2R2^{1/2})
/// with R = R1^{1/2}R2^{1/2}, S = S1^{1/2}S2^{1/2}.
CheckOutcome check_lemma_u1(const CommutingQuadruple& q, double tol = 1e-9);

/// Top-k product inequality for the commuting quadruple, evaluated on two
/// independent paths: directly on the spectra and through k-th compound
/// matrices. Both must hold and agree to 1e-8.
CheckOutcome check_prop_u2(const CommutingQuadruple& q, int k, double tol = 1e-9);

/// The p-weighted version over a grid of p in [0, 1], every k at once.
CheckOutcome check_prop_u3(const CommutingQuadruple& q, const std::vector<double>& p_grid,
                           double tol = 1e-9);
std::vector<double> default_p_grid();

/// Per-index: lambda_i(min(A,1) min(B,1)) <= min(lambda_i(AB), 1).
CheckOutcome check_min_lemma(const PsdMatrix& a, const PsdMatrix& b, double tol = 1e-9);

/// Closure of the inequality under geometric means: if f1 and f2 pass on
/// (a, b), then f1^p f2^(1-p) passes too.
CheckOutcome check_prop_convex(const PsdMatrix& a, const PsdMatrix& b, const ScalarFunction& f1,
                               const ScalarFunction& f2, double p, double tol = 1e-9);

/// trace(e^-A e^-B) <= trace(e^-A + e^-B) + trace(e^-2C - 2 e^-C) with
/// C = (A^{1/2} B A^{1/2})^{1/2}.
CheckOutcome check_gt_complement(const PsdMatrix& a, const PsdMatrix& b, double tol = 1e-9);

/// prod_{i<=k} lambda_i(AB) <= prod_{i<=k} lambda_i(A) lambda_i(B) for
/// positive definite A, B; log-domain margin at the given k.
CheckOutcome check_lidskii(const PsdMatrix& a, const PsdMatrix& b, int k, double tol = 1e-9);

} // namespace logmaj
