#include "svrdoa/array_signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace svrdoa {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

void validate(const ArrayGeometry& geom) {
    if (geom.n_elements < 3) {
        throw std::invalid_argument("ArrayGeometry: need at least 3 elements");
    }
    if (!(geom.radius_wavelengths > 0.0) || !std::isfinite(geom.radius_wavelengths)) {
        throw std::invalid_argument("ArrayGeometry: radius must be positive and finite");
    }
}

std::vector<double> uca_azimuths(int n) {
    std::vector<double> beta(n);
    for (int i = 0; i < n; ++i) {
        beta[i] = 2.0 * kPi * i / n;
    }
    return beta;
}

}  // namespace

ArrayGeometry ArrayGeometry::uca(int n_elements, double spacing_wavelengths) {
    if (n_elements < 3) {
        throw std::invalid_argument("ArrayGeometry: need at least 3 elements");
    }
    // Chord relation d = 2 r sin(pi/N).
    double radius = spacing_wavelengths / (2.0 * std::sin(kPi / n_elements));
    return uca_radius(n_elements, radius);
}

ArrayGeometry ArrayGeometry::uca_radius(int n_elements, double radius_wavelengths) {
    ArrayGeometry geom;
    geom.n_elements = n_elements;
    geom.radius_wavelengths = radius_wavelengths;
    geom.element_azimuths = uca_azimuths(n_elements);
    validate(geom);
    return geom;
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geom, double theta_deg, double phi_deg) {
    validate(geom);
    if (!std::isfinite(theta_deg) || !std::isfinite(phi_deg)) {
        throw std::invalid_argument("steering_vector: angles must be finite");
    }
    const double sin_theta = std::sin(deg2rad(theta_deg));
    const double phi = deg2rad(phi_deg);
    const double scale = 2.0 * kPi * geom.radius_wavelengths * sin_theta;

    Eigen::VectorXcd a(geom.n_elements);
    for (int n = 0; n < geom.n_elements; ++n) {
        double phase = scale * std::cos(phi - geom.element_azimuths[n]);
        a(n) = std::polar(1.0, phase);
    }
    return a;
}

double noise_power_from_snr_db(double snr_db) {
    if (snr_db == kNoiselessSnrDb) {
        return 0.0;
    }
    return std::pow(10.0, -snr_db / 10.0);
}

SnapshotMatrix simulate_snapshots(const ArrayGeometry& geom, const SourceTruth& source,
                                  double snr_db, int n_snapshots, std::uint64_t seed) {
    if (n_snapshots < 1) {
        throw std::invalid_argument("simulate_snapshots: need at least one snapshot");
    }
    const Eigen::VectorXcd a = steering_vector(geom, source.theta_deg, source.phi_deg);
    const double sigma_s_sq = 1.0;
    const double sigma_sq = noise_power_from_snr_db(snr_db);

    // Circularly symmetric: each quadrature carries half the power.
    const double s_amp = std::sqrt(sigma_s_sq / 2.0);
    const double w_amp = std::sqrt(sigma_sq / 2.0);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SnapshotMatrix x;
    x.data.resize(geom.n_elements, n_snapshots);
    for (int m = 0; m < n_snapshots; ++m) {
        std::complex<double> s(s_amp * gauss(rng), s_amp * gauss(rng));
        for (int n = 0; n < geom.n_elements; ++n) {
            std::complex<double> w(0.0, 0.0);
            if (w_amp > 0.0) {
                w = std::complex<double>(w_amp * gauss(rng), w_amp * gauss(rng));
            }
            x.data(n, m) = a(n) * s + w;
        }
    }
    return x;
}

Eigen::MatrixXcd ideal_covariance(const ArrayGeometry& geom, const SourceTruth& source,
                                  double sigma_s_sq, double sigma_sq) {
    if (!(sigma_s_sq > 0.0) || sigma_sq < 0.0) {
        throw std::invalid_argument("ideal_covariance: need sigma_s^2 > 0 and sigma^2 >= 0");
    }
    const Eigen::VectorXcd a = steering_vector(geom, source.theta_deg, source.phi_deg);
    Eigen::MatrixXcd r = sigma_s_sq * (a * a.adjoint());
    r.diagonal().array() += sigma_sq;
    // a a^H is Hermitian up to rounding; enforce it exactly.
    return ((r + r.adjoint()) * 0.5).eval();
}

}  // namespace svrdoa
