#pragma once

#include <json.hpp>

#include "logmaj/linalg.hpp"

namespace logmaj {

/// Per-k partial-sum margins of a majorisation comparison. Margins are
/// reported for every k, including past the first failure.
struct MajorizationReport {
    std::vector<double> k_margins;
    bool holds = false;
    double tolerance = 0.0;
    bool zero_policy_applied = false;

    double min_margin() const;
    nlohmann::json to_json() const;
};

/// x prec_{w(log)} y: for every k, sum_{j<=k} log x_j <= sum_{j<=k} log y_j.
/// Computed in the log domain; values below 1e-300 are clamped (recorded in
/// zero_policy_applied). Entries must be >= 0.
MajorizationReport log_submajorize(const Spectrum& x, const Spectrum& y, double tolerance = 1e-9);

/// x prec_w y on the raw values: partial-sum margins sum_{j<=k} (y_j - x_j).
MajorizationReport weak_majorize(const Spectrum& x, const Spectrum& y, double tolerance = 1e-9);

} // namespace logmaj
