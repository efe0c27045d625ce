#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace svrdoa {

/// Sentinel SNR meaning "no noise at all" (sigma = 0).
inline constexpr double kNoiselessSnrDb = std::numeric_limits<double>::infinity();

/// Uniform circular array on the xy-plane, element 1 on the x-axis and the
/// rest placed counter-clockwise at beta_n = 2*pi*(n-1)/N.
struct ArrayGeometry {
    int n_elements = 0;
    double radius_wavelengths = 0.0;     // r / lambda
    std::vector<double> element_azimuths;  // radians, strictly increasing, beta_1 = 0

    /// Geometry from the inter-element chord spacing d/lambda (default half
    /// a wavelength), using r = d / (2 sin(pi/N)).
    static ArrayGeometry uca(int n_elements, double spacing_wavelengths = 0.5);

    /// Geometry with the circle radius given directly in wavelengths.
    static ArrayGeometry uca_radius(int n_elements, double radius_wavelengths);

    int feature_length() const { return n_elements * (n_elements - 1) / 2; }
};

/// Ground-truth source direction. theta is measured down from the z-axis
/// (boresight), phi counter-clockwise from the x-axis.
struct SourceTruth {
    double theta_deg = 0.0;  // [0, 90]
    double phi_deg = 0.0;    // [0, 180.5]
};

/// N x M complex baseband samples: one column per snapshot.
struct SnapshotMatrix {
    Eigen::MatrixXcd data;

    int n_antennas() const { return static_cast<int>(data.rows()); }
    int n_snapshots() const { return static_cast<int>(data.cols()); }
};

/// Array response a(theta, phi): element n carries phase
/// 2*pi*(r/lambda)*sin(theta)*cos(phi - beta_n). Every entry has unit modulus.
Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double theta_deg, double phi_deg);

/// x(m) = a s(m) + w(m) with s and w i.i.d. circularly symmetric complex
/// Gaussian, source power sigma_s^2 = 1 and per-element noise power
/// sigma^2 = 10^(-snr_db/10). snr_db = kNoiselessSnrDb sets sigma = 0.
/// Identical seeds produce identical matrices.
SnapshotMatrix simulate_snapshots(const ArrayGeometry& geom, const SourceTruth& source,
                                  double snr_db, int n_snapshots, std::uint64_t seed);

/// Ensemble covariance sigma_s^2 * a a^H + sigma^2 * I; Hermitian by construction.
Eigen::MatrixXcd ideal_covariance(const ArrayGeometry& geom, const SourceTruth& source,
                                  double sigma_s_sq, double sigma_sq);

/// Per-element noise power for a given SNR with sigma_s^2 = 1.
double noise_power_from_snr_db(double snr_db);

}  // namespace svrdoa
