#include "logmaj/checks.hpp"

#include <algorithm>
#include <cmath>

namespace logmaj {

namespace {

constexpr double kLogClamp = 1e-300;

double safe_log(double v) { return std::log(std::max(v, kLogClamp)); }

void require_positive_definite(const PsdMatrix& m, const char* who) {
    if (m.spectrum().min() <= 0.0) {
        throw Error(std::string(who) + ": singular input (needs positive definite matrices)");
    }
}

void require_spectrum_in_domain(const PsdMatrix& m, const ScalarFunction& f, const char* who) {
    const double top = m.spectrum().max();
    if (!f.in_domain(top)) {
        throw Error(std::string(who) + ": eigenvalue " + std::to_string(top) + " outside dom(" +
                    f.label() + ")");
    }
}

/// sqrt(lambda_i(AB)), guarded by the containment lemma: the roots live in
/// the spectral hull of A and B, so anything beyond it by more than the
/// tolerance band is a numerical breach and an error.
std::vector<double> product_roots(const PsdMatrix& a, const PsdMatrix& b, const ScalarFunction& f,
                                  const char* who) {
    const Spectrum prod = product_spectrum(a, b);
    const double hull = std::max(a.spectrum().max(), b.spectrum().max());
    std::vector<double> roots;
    roots.reserve(static_cast<size_t>(prod.size()));
    for (double lambda : prod.values()) {
        double r = std::sqrt(std::max(lambda, 0.0));
        if (r > hull) {
            if (r > hull * (1.0 + 1e-9) + 1e-9) {
                throw Error(std::string(who) + ": containment breach, sqrt(lambda(AB)) = " +
                            std::to_string(r) + " above spectral hull " + std::to_string(hull));
            }
            r = hull;
        }
        if (!f.in_domain(r)) {
            throw Error(std::string(who) + ": sqrt(lambda(AB)) = " + std::to_string(r) +
                        " outside dom(" + f.label() + ")");
        }
        roots.push_back(r);
    }
    return roots;
}

CheckOutcome from_majorization(std::string name, MajorizationReport report, std::string digest) {
    CheckOutcome out;
    out.name = std::move(name);
    out.holds = report.holds;
    out.verdict = report.holds ? "holds" : "violated";
    out.margin = report.min_margin();
    out.tolerance = report.tolerance;
    out.inputs_digest = std::move(digest);
    out.detail = nlohmann::json{{"majorization", report.to_json()}};
    return out;
}

/// R1^{1/2} R2^{1/2} for a commuting PSD pair; symmetric PSD up to roundoff.
PsdMatrix commuting_root_product(const PsdMatrix& m1, const PsdMatrix& m2) {
    Matrix p = mat_sqrt(m1).entries() * mat_sqrt(m2).entries();
    for (int i = 0; i < p.dim(); ++i) {
        for (int j = i + 1; j < p.dim(); ++j) {
            const double v = 0.5 * (p(i, j) + p(j, i));
            p(i, j) = v;
            p(j, i) = v;
        }
    }
    return PsdMatrix::from_entries(p);
}

/// R1^p R2^{1-p} for a commuting PSD pair.
PsdMatrix commuting_power_product(const PsdMatrix& m1, const PsdMatrix& m2, double p) {
    const ScalarFunction pw1 = builtin("power", {p});
    const ScalarFunction pw2 = builtin("power", {1.0 - p});
    Matrix prod = matrix_function(m1, pw1).entries() * matrix_function(m2, pw2).entries();
    for (int i = 0; i < prod.dim(); ++i) {
        for (int j = i + 1; j < prod.dim(); ++j) {
            const double v = 0.5 * (prod(i, j) + prod(j, i));
            prod(i, j) = v;
            prod(j, i) = v;
        }
    }
    return PsdMatrix::from_entries(prod);
}

double partial_log_sum(const Spectrum& s, int k) {
    double sum = 0.0;
    for (int i = 0; i < k; ++i) sum += safe_log(s[i]);
    return sum;
}

} // namespace

nlohmann::json CheckOutcome::to_json() const {
    return nlohmann::json{{"name", name},          {"verdict", verdict},
                          {"holds", holds},        {"margin", margin},
                          {"tolerance", tolerance}, {"inputs_digest", inputs_digest},
                          {"detail", detail}};
}

CheckOutcome check_alt_classic(const PsdMatrix& a, const PsdMatrix& b, double t, AltDirection dir,
                               double tol) {
    if (t <= 0.0) throw Error("check_alt_classic: t must be positive");
    require_positive_definite(a, "check_alt_classic");
    require_positive_definite(b, "check_alt_classic");

    const ScalarFunction power_t = builtin("power", {t});
    const Spectrum left = product_spectrum(matrix_function(a, power_t), matrix_function(b, power_t));
    const Spectrum right = product_spectrum(a, b).map([t](double v) { return std::pow(v, t); });

    const bool reversed = dir == AltDirection::Reversed || (dir == AltDirection::Auto && t > 1.0);
    MajorizationReport report =
        reversed ? log_submajorize(right, left, tol) : log_submajorize(left, right, tol);

    CheckOutcome out = from_majorization(
        "alt", std::move(report),
        "dim=" + std::to_string(a.dim()) + ";t=" + std::to_string(t));
    out.detail["t"] = t;
    out.detail["direction"] = reversed ? "reversed" : "forward";
    return out;
}

CheckOutcome check_falt(const PsdMatrix& a, const PsdMatrix& b, const ScalarFunction& f, double tol) {
    require_spectrum_in_domain(a, f, "check_falt");
    require_spectrum_in_domain(b, f, "check_falt");

    const Spectrum left = product_spectrum(matrix_function(a, f), matrix_function(b, f));
    std::vector<double> rhs;
    for (double r : product_roots(a, b, f, "check_falt")) {
        const double v = f(r);
        rhs.push_back(v * v);
    }
    CheckOutcome out = from_majorization(
        "falt", log_submajorize(left, Spectrum(std::move(rhs)), tol),
        "dim=" + std::to_string(a.dim()) + ";f=" + f.label());
    out.detail["function"] = f.label();
    return out;
}

CheckOutcome check_ralt(const PsdMatrix& x, const PsdMatrix& y, const ScalarFunction& g, double tol) {
    require_spectrum_in_domain(x, g, "check_ralt");
    require_spectrum_in_domain(y, g, "check_ralt");

    const Spectrum right = product_spectrum(matrix_function(x, g), matrix_function(y, g));
    std::vector<double> lhs;
    for (double r : product_roots(x, y, g, "check_ralt")) {
        const double v = g(r);
        lhs.push_back(v * v);
    }
    CheckOutcome out = from_majorization(
        "ralt", log_submajorize(Spectrum(std::move(lhs)), right, tol),
        "dim=" + std::to_string(x.dim()) + ";g=" + g.label());
    out.detail["function"] = g.label();
    return out;
}

CheckOutcome check_lemma_u1(const CommutingQuadruple& q, double tol) {
    const PsdMatrix big_r = commuting_root_product(q.r1, q.r2);
    const PsdMatrix big_s = commuting_root_product(q.s1, q.s2);

    const double lam_rs = product_spectrum(big_r, big_s).max();
    const double lhs = lam_rs * lam_rs;

    const PsdMatrix p1 = symmetrized_product(q.r1, q.s1);
    const PsdMatrix p2 = symmetrized_product(q.r2, q.s2);
    const double rhs = product_spectrum(p1, p2).max();

    CheckOutcome out;
    out.name = "lemma_u1";
    out.margin = rhs - lhs;
    out.tolerance = tol * std::max(1.0, std::abs(rhs));
    out.holds = out.margin >= -out.tolerance;
    out.verdict = out.holds ? "holds" : "violated";
    out.inputs_digest = "dim=" + std::to_string(q.r1.dim());
    out.detail = nlohmann::json{{"lhs", lhs}, {"rhs", rhs}};
    return out;
}

CheckOutcome check_prop_u2(const CommutingQuadruple& q, int k, double tol) {
    const int n = q.r1.dim();
    if (k < 1 || k > n) throw Error("check_prop_u2: k out of range");

    const PsdMatrix big_r = commuting_root_product(q.r1, q.r2);
    const PsdMatrix big_s = commuting_root_product(q.s1, q.s2);

    // direct path: partial products of the original spectra, in log domain
    const Spectrum rs = product_spectrum(big_r, big_s);
    const Spectrum r1s1 = product_spectrum(q.r1, q.s1);
    const Spectrum s2r2 = product_spectrum(q.s2, q.r2);
    const double direct_lhs = partial_log_sum(rs, k);
    const double direct_rhs = 0.5 * (partial_log_sum(r1s1, k) + partial_log_sum(s2r2, k));

    // compound path: the same two sides as top eigenvalues of k-compounds
    const PsdMatrix cr = compound(big_r, k);
    const PsdMatrix cs = compound(big_s, k);
    const double comp_lhs = safe_log(product_spectrum(cr, cs).max());
    const double comp_rhs =
        0.5 * (safe_log(product_spectrum(compound(q.r1, k), compound(q.s1, k)).max()) +
               safe_log(product_spectrum(compound(q.s2, k), compound(q.r2, k)).max()));

    // the boost step itself: the top-eigenvalue lemma applied to the compounds
    const CommutingQuadruple cq(compound(q.r1, k), compound(q.r2, k), compound(q.s1, k),
                                compound(q.s2, k));
    const CheckOutcome u1_on_compounds = check_lemma_u1(cq, tol);

    const double direct_margin = direct_rhs - direct_lhs;
    const double comp_margin = comp_rhs - comp_lhs;
    const double agree_lhs = std::abs(direct_lhs - comp_lhs);
    const double agree_rhs = std::abs(direct_rhs - comp_rhs);
    const bool paths_agree = agree_lhs <= 1e-8 && agree_rhs <= 1e-8;

    CheckOutcome out;
    out.name = "prop_u2";
    out.margin = std::min(direct_margin, comp_margin);
    out.tolerance = tol;
    out.holds = out.margin >= -tol && paths_agree && u1_on_compounds.holds;
    out.verdict = out.holds ? "holds" : "violated";
    out.inputs_digest = "dim=" + std::to_string(n) + ";k=" + std::to_string(k);
    out.detail = nlohmann::json{
        {"k", k},
        {"direct", {{"lhs_log", direct_lhs}, {"rhs_log", direct_rhs}, {"margin", direct_margin}}},
        {"compound", {{"lhs_log", comp_lhs}, {"rhs_log", comp_rhs}, {"margin", comp_margin}}},
        {"paths_agree", paths_agree},
        {"agreement", {{"lhs_delta", agree_lhs}, {"rhs_delta", agree_rhs}}},
        {"lemma_u1_on_compounds", u1_on_compounds.to_json()}};
    return out;
}

std::vector<double> default_p_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 16; ++i) grid.push_back(static_cast<double>(i) / 16.0);
    grid.push_back(1.0 / 3.0);
    grid.push_back(2.0 / 3.14159265358979323846);
    std::sort(grid.begin(), grid.end());
    return grid;
}

CheckOutcome check_prop_u3(const CommutingQuadruple& q, const std::vector<double>& p_grid, double tol) {
    const int n = q.r1.dim();
    const Spectrum r1s1 = product_spectrum(q.r1, q.s1);
    const Spectrum s2r2 = product_spectrum(q.s2, q.r2);

    CheckOutcome out;
    out.name = "prop_u3";
    out.tolerance = tol;
    out.margin = std::numeric_limits<double>::infinity();
    out.detail["rows"] = nlohmann::json::array();

    for (double p : p_grid) {
        if (p < 0.0 || p > 1.0) throw Error("check_prop_u3: p outside [0, 1]");
        const PsdMatrix rp = commuting_power_product(q.r1, q.r2, p);
        const PsdMatrix sp = commuting_power_product(q.s1, q.s2, p);
        const Spectrum lhs = product_spectrum(rp, sp);

        nlohmann::json margins = nlohmann::json::array();
        double lhs_sum = 0.0, rhs_sum = 0.0;
        for (int k = 0; k < n; ++k) {
            lhs_sum += safe_log(lhs[k]);
            rhs_sum += p * safe_log(r1s1[k]) + (1.0 - p) * safe_log(s2r2[k]);
            const double margin = rhs_sum - lhs_sum;
            out.margin = std::min(out.margin, margin);
            margins.push_back(margin);
        }
        out.detail["rows"].push_back(nlohmann::json{{"p", p}, {"k_margins", margins}});
    }
    out.holds = out.margin >= -tol;
    out.verdict = out.holds ? "holds" : "violated";
    out.inputs_digest = "dim=" + std::to_string(n) + ";p_grid=" + std::to_string(p_grid.size());
    return out;
}

CheckOutcome check_min_lemma(const PsdMatrix& a, const PsdMatrix& b, double tol) {
    const ScalarFunction clip = builtin("min_clip", {1.0});
    const Spectrum left = product_spectrum(matrix_function(a, clip), matrix_function(b, clip));
    const Spectrum prod = product_spectrum(a, b);

    CheckOutcome out;
    out.name = "min_lemma";
    out.tolerance = tol;
    out.margin = std::numeric_limits<double>::infinity();
    nlohmann::json margins = nlohmann::json::array();
    bool holds = true;
    for (int i = 0; i < prod.size(); ++i) {
        const double rhs = std::min(prod[i], 1.0);
        const double margin = rhs - left[i];
        margins.push_back(margin);
        out.margin = std::min(out.margin, margin);
        holds = holds && margin >= -tol * std::max(1.0, rhs);
    }
    out.holds = holds;
    out.verdict = holds ? "holds" : "violated";
    out.inputs_digest = "dim=" + std::to_string(a.dim());
    out.detail = nlohmann::json{{"per_index_margins", margins},
                                {"left", left.values()},
                                {"product", prod.values()}};
    return out;
}

CheckOutcome check_prop_convex(const PsdMatrix& a, const PsdMatrix& b, const ScalarFunction& f1,
                               const ScalarFunction& f2, double p, double tol) {
    if (p < 0.0 || p > 1.0) throw Error("check_prop_convex: p outside [0, 1]");
    const CheckOutcome premise1 = check_falt(a, b, f1, tol);
    const CheckOutcome premise2 = check_falt(a, b, f2, tol);

    CheckOutcome out;
    out.name = "prop_convex";
    out.tolerance = tol;
    out.inputs_digest = "dim=" + std::to_string(a.dim()) + ";f1=" + f1.label() + ";f2=" + f2.label() +
                        ";p=" + std::to_string(p);
    out.detail = nlohmann::json{{"premise_f1", premise1.to_json()}, {"premise_f2", premise2.to_json()}};

    if (!premise1.holds || !premise2.holds) {
        out.holds = false;
        out.verdict = "premise-failed";
        out.margin = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const CheckOutcome conclusion = check_falt(a, b, geometric_mean(f1, f2, p), tol);
    out.holds = conclusion.holds;
    out.verdict = conclusion.holds ? "holds" : "conclusion-failed";
    out.margin = conclusion.margin;
    out.detail["conclusion"] = conclusion.to_json();
    return out;
}

CheckOutcome check_gt_complement(const PsdMatrix& a, const PsdMatrix& b, double tol) {
    const ScalarFunction exp_neg("exp(-x)", std::numeric_limits<double>::infinity(),
                                 [](double x) { return std::exp(-x); },
                                 [](double x) { return -std::exp(-x); });
    const PsdMatrix ea = matrix_function(a, exp_neg);
    const PsdMatrix eb = matrix_function(b, exp_neg);

    double lhs = 0.0; // trace(e^-A e^-B), Frobenius inner product of symmetric factors
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) lhs += ea(i, j) * eb(i, j);

    double rhs = ea.trace() + eb.trace();
    for (double lambda : product_spectrum(a, b).values()) {
        const double c = std::sqrt(std::max(lambda, 0.0));
        rhs += std::exp(-2.0 * c) - 2.0 * std::exp(-c);
    }

    CheckOutcome out;
    out.name = "gt_complement";
    out.margin = rhs - lhs;
    out.tolerance = tol * std::max(1.0, std::abs(rhs));
    out.holds = out.margin >= -out.tolerance;
    out.verdict = out.holds ? "holds" : "violated";
    out.inputs_digest = "dim=" + std::to_string(a.dim());
    out.detail = nlohmann::json{{"lhs", lhs}, {"rhs", rhs}};
    return out;
}

CheckOutcome check_lidskii(const PsdMatrix& a, const PsdMatrix& b, int k, double tol) {
    if (k < 1 || k > a.dim()) throw Error("check_lidskii: k out of range");
    require_positive_definite(a, "check_lidskii");
    require_positive_definite(b, "check_lidskii");

    const Spectrum prod = product_spectrum(a, b);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < k; ++i) {
        lhs += safe_log(prod[i]);
        rhs += safe_log(a.spectrum()[i]) + safe_log(b.spectrum()[i]);
    }

    CheckOutcome out;
    out.name = "lidskii";
    out.margin = rhs - lhs;
    out.tolerance = tol;
    out.holds = out.margin >= -tol;
    out.verdict = out.holds ? "holds" : "violated";
    out.inputs_digest = "dim=" + std::to_string(a.dim()) + ";k=" + std::to_string(k);
    out.detail = nlohmann::json{{"k", k}, {"lhs_log", lhs}, {"rhs_log", rhs}};
    return out;
}

} // namespace logmaj
