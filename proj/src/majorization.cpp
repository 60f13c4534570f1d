#include "logmaj/majorization.hpp"

#include <algorithm>
#include <cmath>

namespace logmaj {

double MajorizationReport::min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : k_margins) m = std::min(m, v);
    return m;
}

nlohmann::json MajorizationReport::to_json() const {
    return nlohmann::json{{"holds", holds},
                          {"k_margins", k_margins},
                          {"tolerance", tolerance},
                          {"zero_policy_applied", zero_policy_applied}};
}

MajorizationReport log_submajorize(const Spectrum& x, const Spectrum& y, double tolerance) {
    if (x.size() != y.size()) throw Error("log_submajorize: spectra must have equal length");
    MajorizationReport report;
    report.tolerance = tolerance;

    constexpr double kClamp = 1e-300;
    double sum = 0.0;
    for (int k = 0; k < x.size(); ++k) {
        const double xv = x[k], yv = y[k];
        if (xv < 0.0 || yv < 0.0) throw Error("log_submajorize: negative spectrum entry");
        const bool x_zero = xv < kClamp, y_zero = yv < kClamp;
        if (x_zero || y_zero) report.zero_policy_applied = true;
        if (x_zero && y_zero) {
            // both sides vanish at this index; contributes no margin
        } else {
            sum += std::log(std::max(yv, kClamp)) - std::log(std::max(xv, kClamp));
        }
        report.k_margins.push_back(sum);
    }
    report.holds = report.min_margin() >= -tolerance;
    return report;
}

MajorizationReport weak_majorize(const Spectrum& x, const Spectrum& y, double tolerance) {
    if (x.size() != y.size()) throw Error("weak_majorize: spectra must have equal length");
    MajorizationReport report;
    report.tolerance = tolerance;
    double sum = 0.0;
    for (int k = 0; k < x.size(); ++k) {
        sum += y[k] - x[k];
        report.k_margins.push_back(sum);
    }
    report.holds = report.min_margin() >= -tolerance;
    return report;
}

} // namespace logmaj
