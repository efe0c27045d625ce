#pragma once

#include "svrdoa/array_signal.hpp"

#include <stdexcept>

namespace svrdoa {

/// Eigenvalues sorted descending, eigenvector columns orthonormal and paired
/// with their eigenvalues.
struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

class EvdNonConvergence : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Cyclic Jacobi rotations for Hermitian matrices. tol is relative to the
/// Frobenius norm of R.
EigenDecomposition hermitian_evd(const Eigen::MatrixXcd& R, double tol = 1e-13);

/// Rectangular (theta, phi) search grid in degrees.
struct GridSpec {
    double theta_start_deg = 1.0;
    double theta_step_deg = 1.0;
    int n_theta = 90;
    double phi_start_deg = 0.0;
    double phi_step_deg = 1.0;
    int n_phi = 181;

    double theta_at(int i) const { return theta_start_deg + i * theta_step_deg; }
    double phi_at(int j) const { return phi_start_deg + j * phi_step_deg; }
};

/// Steering vectors precomputed for every grid point (column-major over the
/// grid, theta outer, phi inner). Shared across trials in the benchmark.
struct SteeringTable {
    GridSpec grid;
    Eigen::MatrixXcd vectors;  // N x (n_theta * n_phi)
};

SteeringTable build_steering_table(const ArrayGeometry& geom, const GridSpec& grid);

struct MusicEstimate {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    bool degenerate_subspace = false;  // signal/noise eigenvalue gap below tolerance
    double eigen_gap = 0.0;
};

/// Pseudo-spectrum P(theta, phi) = 1 / (a^H En En^H a) evaluated on the grid
/// from a noise-subspace projector. Values are clamped positive finite.
Eigen::MatrixXd music_spectrum(const Eigen::MatrixXcd& noise_projector,
                               const SteeringTable& table);

/// Strictly-greater scan, theta rows outer: ties resolve to the lowest theta
/// index, then the lowest phi index. Returns (theta_deg, phi_deg).
std::pair<double, double> grid_argmax(const Eigen::MatrixXd& values, const GridSpec& grid);

/// 2D MUSIC grid argmax for n_sources (only 1 validated). Ties break toward
/// the lowest theta index, then the lowest phi index.
MusicEstimate music_estimate(const Eigen::MatrixXcd& R, const ArrayGeometry& geom,
                             const GridSpec& grid, int n_sources = 1,
                             double gap_tol = 1e-12,
                             const SteeringTable* table = nullptr);

}  // namespace svrdoa
