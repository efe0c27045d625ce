#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "svrdoa/array_signal.hpp"

namespace svrdoa {

/// Phases of the strict upper triangle of a covariance matrix, in row-major
/// pair order (0,1),(0,2),...,(0,N-1),(1,2),...,(N-2,N-1). Entries whose
/// covariance modulus was zero carry phase 0 and a degeneracy flag.
struct PhaseVector {
    std::vector<double> phases;                // radians
    std::vector<std::pair<int, int>> pairs;    // 0-based (i, j), i < j
    std::vector<bool> degenerate;

    int n_pairs() const { return static_cast<int>(phases.size()); }
    bool any_degenerate() const;
    double norm() const;
};

/// Unit-norm SVR input z = g / ||g||.
struct FeatureVector {
    Eigen::VectorXd z;

    int size() const { return static_cast<int>(z.size()); }
};

/// Outcome of feature normalization: either a unit-norm feature or the
/// boresight shortcut (||g|| below tolerance means theta = 0 and phi is
/// meaningless, a decision made immediately from the input data).
struct FeatureExtraction {
    std::optional<FeatureVector> feature;
    double g_norm = 0.0;

    bool boresight() const { return !feature.has_value(); }
};

/// Thrown by unwrap_phases when two wrap offsets explain a component equally well.
class AmbiguityUnresolved : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// R_hat = (1/M) sum_m x(m) x(m)^H, symmetrized to be exactly Hermitian.
Eigen::MatrixXcd sample_covariance(const SnapshotMatrix& x);

/// Principal-value arguments of the strict upper triangle of R.
PhaseVector extract_phase_vector(const Eigen::MatrixXcd& R);

/// Analytic zero-noise phases 2*pi*(r/lambda)*sin(theta)*(cos(phi-beta_i) -
/// cos(phi-beta_j)), without principal-value reduction.
PhaseVector noiseless_phase(const ArrayGeometry& geom, double theta_deg, double phi_deg);

/// z = g/||g|| when ||g|| > boresight_tol, otherwise the boresight outcome.
FeatureExtraction normalize_features(const PhaseVector& g, double boresight_tol);

/// Boresight threshold on ||g||: 1e-6 for noiseless data, otherwise scaled
/// with the phase noise floor sqrt(P) * sigma^2 / (M * sigma_s^2).
double default_boresight_tol(int n_pairs, double snr_db, int n_snapshots);

/// Restores 2*pi wraps on components whose noiseless magnitude can exceed pi
/// within theta <= theta_max. A reference (u, phi) fit over the unambiguous
/// components selects the offset in {-2pi, 0, +2pi} with the smallest
/// residual; exact ties raise AmbiguityUnresolved.
PhaseVector unwrap_phases(const PhaseVector& g, const ArrayGeometry& geom, double theta_max_deg);

}  // namespace svrdoa
