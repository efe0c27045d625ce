#include "svrdoa/cfa_elevation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace svrdoa {

ElevationEstimate estimate_elevation(const ArrayGeometry& geom, double phi_hat_deg,
                                     const PhaseVector& g, const CfaOptions& opts) {
    if (!std::isfinite(phi_hat_deg)) {
        throw std::invalid_argument("estimate_elevation: azimuth must be finite");
    }
    const double phi = phi_hat_deg * std::numbers::pi / 180.0;

    ElevationEstimate out;
    std::vector<double> ratios;
    ratios.reserve(g.n_pairs());
    for (int k = 0; k < g.n_pairs(); ++k) {
        if (g.degenerate[k]) {
            ++out.degenerate_pairs_dropped;
            continue;
        }
        const double gamma = std::cos(phi - geom.element_azimuths[g.pairs[k].first]) -
                             std::cos(phi - geom.element_azimuths[g.pairs[k].second]);
        if (std::abs(gamma) < opts.gamma_min) {
            ++out.degenerate_pairs_dropped;
            continue;
        }
        ratios.push_back(g.phases[k] / gamma);
    }
    if (ratios.empty()) {
        throw AllPairsDegenerate("estimate_elevation: no pair with |gamma| >= gamma_min");
    }

    if (opts.trimmed_mean && ratios.size() >= 3) {
        std::sort(ratios.begin(), ratios.end());
        const size_t cut = ratios.size() / 10;
        ratios.erase(ratios.end() - cut, ratios.end());
        ratios.erase(ratios.begin(), ratios.begin() + cut);
    }

    double mean = 0.0;
    for (double r : ratios) {
        mean += r;
    }
    mean /= static_cast<double>(ratios.size());
    out.n_pairs_used = static_cast<int>(ratios.size());

    double arg = mean / (2.0 * std::numbers::pi * geom.radius_wavelengths);
    if (arg > 1.0) {
        // Rounding alone can land a hair past 1 at theta = 90, which is a
        // legitimate in-FOV answer, not an overshoot worth flagging.
        out.clamped = arg > 1.0 + 1e-9;
        arg = 1.0;
    } else if (arg < 0.0) {
        arg = 0.0;  // FOV is theta in [0, 90]
        out.clamped = true;
    }
    out.theta_deg = std::asin(arg) * 180.0 / std::numbers::pi;
    return out;
}

}  // namespace svrdoa
