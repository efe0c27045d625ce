#include "svrdoa/covariance_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace svrdoa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

std::vector<std::pair<int, int>> upper_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (int i = 0; i < n - 1; ++i) {
        for (int j = i + 1; j < n; ++j) {
            pairs.emplace_back(i, j);
        }
    }
    return pairs;
}

// gamma_ij(phi) = cos(phi - beta_i) - cos(phi - beta_j) for every pair.
std::vector<double> pair_chords(const ArrayGeometry& geom,
                                const std::vector<std::pair<int, int>>& pairs, double phi_rad) {
    std::vector<double> gamma(pairs.size());
    for (size_t k = 0; k < pairs.size(); ++k) {
        gamma[k] = std::cos(phi_rad - geom.element_azimuths[pairs[k].first]) -
                   std::cos(phi_rad - geom.element_azimuths[pairs[k].second]);
    }
    return gamma;
}

}  // namespace

bool PhaseVector::any_degenerate() const {
    return std::find(degenerate.begin(), degenerate.end(), true) != degenerate.end();
}

double PhaseVector::norm() const {
    double s = 0.0;
    for (double p : phases) {
        s += p * p;
    }
    return std::sqrt(s);
}

Eigen::MatrixXcd sample_covariance(const SnapshotMatrix& x) {
    if (x.n_snapshots() < 1) {
        throw std::invalid_argument("sample_covariance: need at least one snapshot");
    }
    Eigen::MatrixXcd r = (x.data * x.data.adjoint()) / static_cast<double>(x.n_snapshots());
    return ((r + r.adjoint()) * 0.5).eval();
}

PhaseVector extract_phase_vector(const Eigen::MatrixXcd& R) {
    const int n = static_cast<int>(R.rows());
    if (R.cols() != n || n < 2) {
        throw std::invalid_argument("extract_phase_vector: square matrix of order >= 2 required");
    }
    PhaseVector g;
    g.pairs = upper_pairs(n);
    g.phases.resize(g.pairs.size());
    g.degenerate.assign(g.pairs.size(), false);
    for (size_t k = 0; k < g.pairs.size(); ++k) {
        const std::complex<double> v = R(g.pairs[k].first, g.pairs[k].second);
        if (std::abs(v) == 0.0) {
            g.phases[k] = 0.0;
            g.degenerate[k] = true;  // uninformative entry, not an error
        } else {
            g.phases[k] = std::arg(v);
        }
    }
    return g;
}

PhaseVector noiseless_phase(const ArrayGeometry& geom, double theta_deg, double phi_deg) {
    const double u = kTwoPi * geom.radius_wavelengths * std::sin(deg2rad(theta_deg));
    const double phi = deg2rad(phi_deg);

    PhaseVector g;
    g.pairs = upper_pairs(geom.n_elements);
    g.degenerate.assign(g.pairs.size(), false);
    const std::vector<double> gamma = pair_chords(geom, g.pairs, phi);
    g.phases.resize(g.pairs.size());
    for (size_t k = 0; k < g.pairs.size(); ++k) {
        g.phases[k] = u * gamma[k];
    }
    return g;
}

FeatureExtraction normalize_features(const PhaseVector& g, double boresight_tol) {
    FeatureExtraction out;
    out.g_norm = g.norm();
    if (!std::isfinite(out.g_norm)) {
        throw std::invalid_argument("normalize_features: non-finite phase vector");
    }
    if (out.g_norm <= boresight_tol) {
        return out;  // boresight: theta = 0, phi undefined
    }
    FeatureVector z;
    z.z.resize(g.n_pairs());
    for (int k = 0; k < g.n_pairs(); ++k) {
        z.z(k) = g.phases[k] / out.g_norm;
    }
    out.feature = std::move(z);
    return out;
}

double default_boresight_tol(int n_pairs, double snr_db, int n_snapshots) {
    if (snr_db == kNoiselessSnrDb) {
        return 1e-6;
    }
    const double sigma_sq = noise_power_from_snr_db(snr_db);
    return std::sqrt(static_cast<double>(n_pairs)) * sigma_sq / n_snapshots;
}

PhaseVector unwrap_phases(const PhaseVector& g, const ArrayGeometry& geom, double theta_max_deg) {
    const auto& pairs = g.pairs;
    const double u_max =
        kTwoPi * geom.radius_wavelengths * std::sin(deg2rad(theta_max_deg));

    // A component can wrap only if its largest reachable noiseless magnitude
    // u_max * 2|sin((beta_j - beta_i)/2)| exceeds pi. Pairs at exactly pi
    // (every gap-1 pair at half-wavelength spacing) cannot wrap; the relative
    // slack keeps rounding from tipping them over the boundary.
    std::vector<bool> ambiguous(pairs.size(), false);
    bool any_ambiguous = false;
    for (size_t k = 0; k < pairs.size(); ++k) {
        const double half = (geom.element_azimuths[pairs[k].second] -
                             geom.element_azimuths[pairs[k].first]) / 2.0;
        const double reach = u_max * 2.0 * std::abs(std::sin(half));
        if (reach > kPi * (1.0 + 1e-9)) {
            ambiguous[k] = true;
            any_ambiguous = true;
        }
    }
    if (!any_ambiguous) {
        return g;
    }

    // Reference fit: best (u, phi) explaining the trustworthy components,
    // residual of g ~ u * gamma(phi) minimized over a phi grid with the
    // scale u solved in closed form per candidate.
    std::vector<size_t> ref;
    for (size_t k = 0; k < pairs.size(); ++k) {
        if (!ambiguous[k] && !g.degenerate[k]) {
            ref.push_back(k);
        }
    }
    if (ref.empty()) {  // fall back to everything at offset 0
        for (size_t k = 0; k < pairs.size(); ++k) {
            if (!g.degenerate[k]) {
                ref.push_back(k);
            }
        }
    }

    double best_res = std::numeric_limits<double>::infinity();
    double best_u = 0.0;
    double best_phi = 0.0;
    // 1 degree is coarse but plenty: the fit only has to place u*gamma within
    // half a wrap (pi) of the true value.
    constexpr double kPhiStepDeg = 1.0;
    for (double phi_deg = 0.0; phi_deg <= 180.0; phi_deg += kPhiStepDeg) {
        const std::vector<double> gamma = pair_chords(geom, pairs, deg2rad(phi_deg));
        double dot = 0.0;
        double gg = 0.0;
        for (size_t k : ref) {
            dot += g.phases[k] * gamma[k];
            gg += gamma[k] * gamma[k];
        }
        if (gg <= 0.0) {
            continue;
        }
        const double u = std::clamp(dot / gg, 0.0, u_max);
        double res = 0.0;
        for (size_t k : ref) {
            const double d = g.phases[k] - u * gamma[k];
            res += d * d;
        }
        if (res < best_res) {
            best_res = res;
            best_u = u;
            best_phi = phi_deg;
        }
    }

    const std::vector<double> gamma = pair_chords(geom, pairs, deg2rad(best_phi));
    PhaseVector out = g;
    constexpr double kTieTol = 1e-12;
    for (size_t k = 0; k < pairs.size(); ++k) {
        if (!ambiguous[k] || g.degenerate[k]) {
            continue;
        }
        const double target = best_u * gamma[k];
        double best_offset = 0.0;
        double r1 = std::numeric_limits<double>::infinity();  // smallest residual
        double r2 = std::numeric_limits<double>::infinity();  // runner-up
        for (double offset : {-kTwoPi, 0.0, kTwoPi}) {
            const double r = std::abs(g.phases[k] + offset - target);
            if (r < r1) {
                r2 = r1;
                r1 = r;
                best_offset = offset;
            } else if (r < r2) {
                r2 = r;
            }
        }
        if (r2 - r1 < kTieTol) {
            throw AmbiguityUnresolved("unwrap_phases: wrap offsets tie on pair " +
                                      std::to_string(pairs[k].first + 1) + "," +
                                      std::to_string(pairs[k].second + 1));
        }
        out.phases[k] += best_offset;
    }
    return out;
}

}  // namespace svrdoa
