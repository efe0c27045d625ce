#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "svrdoa/covariance_features.hpp"

namespace svrdoa {

/// L azimuth labels with their unit-norm features.
struct TrainingSet {
    std::vector<FeatureVector> features;
    std::vector<double> targets_deg;

    int size() const { return static_cast<int>(targets_deg.size()); }
};

/// Which way the bias enters. Eq.-style "mean(prediction - target)" doubles
/// the error once the bias is added back at prediction time, so the default
/// centers the training residuals instead; the literal variant is kept for
/// comparison.
enum class BiasConvention { kResidualCentering, kPaperLiteral };

struct SvrHyperparams {
    double c_bound = 0.0;        // box bound C > 0
    double epsilon_deg = 0.0;    // insensitive-tube half width, >= 0
    double kernel_width = 0.5;   // RBF delta
    double qp_tolerance = 1e-6;
    long max_iterations = 1'000'000;  // pair updates
    BiasConvention bias_convention = BiasConvention::kResidualCentering;
};

/// epsilon = 1.0043 * sigma at the nominal operating SNR (sigma_s^2 = 1),
/// floored at 1e-3 because training itself is noiseless.
double default_epsilon_deg(double nominal_snr_db = 10.0);

/// C = max(|mu + 3 sigma|, |mu - 3 sigma|) over the targets, sample std
/// (divisor L-1).
double default_c_bound(std::span<const double> targets_deg);

/// RBF kernel exp(-delta * ||z1 - z2||^2).
double rbf_kernel(const FeatureVector& z1, const FeatureVector& z2, double delta);

/// Noiseless features on the azimuth grid phi_i = phi_start + i*step at the
/// given training elevation. Any grid point that lands on boresight is an error.
TrainingSet build_training_set(const ArrayGeometry& geom, double phi_start_deg,
                               double phi_step_deg, int phi_count, double theta_train_deg);

/// Dual solution plus the convergence certificates the solver must satisfy.
struct DualSolution {
    std::vector<double> alpha_up;      // alpha'_i, multipliers pushing predictions up
    std::vector<double> alpha_down;    // alpha_i
    std::vector<double> coefficients;  // beta_i = alpha'_i - alpha_i

    bool converged = false;
    long iterations = 0;
    double kkt_violation = 0.0;        // final max violation
    double objective = 0.0;            // dual objective J
    std::vector<double> objective_trace;  // sampled once per L pair updates
};

/// Maximizes the epsilon-SVR dual with box [0, C] and sum(beta) = 0 by
/// pairwise coordinate ascent on the most violating pair. Non-convergence
/// within max_iterations is flagged, never thrown.
DualSolution solve_dual(const TrainingSet& train, const SvrHyperparams& hp);

struct BiasEstimate {
    double bias_deg = 0.0;
    double eta1 = 0.0;  // admissibility window, computed as printed
    double eta2 = 0.0;
    bool kkt_window_violation = false;
};

/// Bias from the mean training residual (or the literal negated form, per
/// convention), with the [eta1, eta2] admissibility window evaluated and a
/// violation flagged rather than thrown.
BiasEstimate estimate_bias(const DualSolution& sol, const TrainingSet& train,
                           const SvrHyperparams& hp);

struct SvrModel {
    int n_elements = 0;
    std::vector<double> coefficients;
    std::vector<double> alpha_up;
    std::vector<double> alpha_down;
    double bias_deg = 0.0;
    std::vector<FeatureVector> training_features;
    SvrHyperparams hyperparams;
};

/// solve_dual + estimate_bias packaged into a predictor.
SvrModel train_svr(const ArrayGeometry& geom, const TrainingSet& train,
                   const SvrHyperparams& hp, DualSolution* diagnostics = nullptr,
                   BiasEstimate* bias_diag = nullptr);

struct AzimuthPrediction {
    double phi_deg = 0.0;
    bool clamped = false;  // raw prediction fell outside [0, 181]
};

/// phi_hat = sum_i beta_i k(z_i, z) + b, clamped to [0, 181] degrees.
AzimuthPrediction predict_azimuth(const SvrModel& model, const FeatureVector& z);

/// Primal-minus-dual gap of the trained model; small relative to |J| at a
/// genuine optimum, large when the QP was fed an unusable Gram matrix.
double duality_gap(const SvrModel& model, const TrainingSet& train, double dual_objective);

/// Flat versioned text format: header with N, L, delta, C, epsilon, b, then
/// one row per training point (coefficient followed by the feature vector),
/// 17 significant digits throughout.
void save_model(const SvrModel& model, const std::filesystem::path& path);
SvrModel load_model(const std::filesystem::path& path);

}  // namespace svrdoa
