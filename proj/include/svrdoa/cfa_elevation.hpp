#pragma once

#include "svrdoa/covariance_features.hpp"

namespace svrdoa {

struct ElevationEstimate {
    double theta_deg = 0.0;  // [0, 90]
    int n_pairs_used = 0;
    bool clamped = false;    // arcsine argument fell outside [0, 1]
    int degenerate_pairs_dropped = 0;
};

/// Thrown when every pair is dropped (|gamma| below gamma_min or degenerate phase).
class AllPairsDegenerate : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CfaOptions {
    double gamma_min = 0.1;     // |gamma_ij| below this amplifies phase noise > 10x
    bool trimmed_mean = false;  // drop top/bottom 10% of the ratios (off by default)
};

/// Closed-form elevation: theta_hat = arcsin(mean(angle(g_ij)/gamma_ij) /
/// (2 pi r/lambda)) with gamma_ij = cos(phi_hat - beta_i) - cos(phi_hat - beta_j).
/// Arguments past 1 clamp to 90 degrees, negative arguments clamp to 0, both flagged.
ElevationEstimate estimate_elevation(const ArrayGeometry& geom, double phi_hat_deg,
                                     const PhaseVector& g, const CfaOptions& opts = {});

}  // namespace svrdoa
