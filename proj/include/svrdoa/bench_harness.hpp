#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "svrdoa/cfa_elevation.hpp"
#include "svrdoa/complexity_model.hpp"
#include "svrdoa/music_baseline.hpp"
#include "svrdoa/svr_core.hpp"

namespace svrdoa {

/// Everything a benchmark run needs; defaults reproduce the desk-scale
/// reference setup (N = 3, M = 30, training 0:1:180 at 30 deg elevation,
/// testing 0.5:1:180.5 at 60.5 deg).
struct ExperimentConfig {
    // [array]
    int n_elements = 3;
    double spacing_wavelengths = 0.5;

    // [training]
    double train_phi_start_deg = 0.0;
    double train_phi_step_deg = 1.0;
    int train_phi_count = 181;
    double theta_train_deg = 30.0;

    // [test]
    double theta_test_deg = 60.5;
    double test_phi_start_deg = 0.5;
    double test_phi_step_deg = 1.0;
    int test_phi_count = 181;

    // [sweep]
    std::vector<double> snr_db_list = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    std::vector<int> n_elements_list = {3, 4, 5, 6, 7, 8};
    double snr_db_for_n_sweep = 10.0;

    // [trials]
    int n_trials = 200;
    int n_snapshots = 30;
    std::uint64_t seed = 20210913;

    // [svr] (c_bound 0 and epsilon_deg < 0 mean "use the derived defaults")
    double c_bound = 0.0;
    double epsilon_deg = -1.0;
    double nominal_snr_db = 10.0;  // sets the derived epsilon
    double kernel_width = 0.5;
    double qp_tolerance = 1e-6;
    long max_iterations = 1'000'000;

    // [estimator]
    double gamma_min = 0.1;
    bool trimmed_mean = false;

    // [music]
    GridSpec music_grid;

    // [complexity]
    int log2_p = 10;
    int complexity_n_min = 3;
    int complexity_n_max = 16;

    // [run]
    int threads = 0;  // 0 = hardware concurrency
    std::string out_dir = "out";

    ArrayGeometry geometry() const;
    ArrayGeometry geometry_for(int n_elements) const;
    SvrHyperparams hyperparams() const;  // with derived C / epsilon filled in
};

/// Flat key = value file with [section] headers; unknown keys are errors.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::istream& in, const std::string& origin = "<stream>");
/// Config echo in the same format load_config accepts.
std::string config_to_string(const ExperimentConfig& cfg);

/// One sweep point: RMSEs in degrees over all test azimuths and trials.
struct RmseRecord {
    double axis = 0.0;  // snr_db or n_elements
    double rmse_phi_svr = 0.0;
    double rmse_theta_svr = 0.0;
    double rmse_phi_music = 0.0;
    double rmse_theta_music = 0.0;
    long n_trials = 0;     // total trials behind this record
    long n_boresight = 0;  // SVR boresight shortcuts (azimuth error excluded)
    long n_clamp = 0;      // clamped SVR azimuth or CFA arcsine arguments
};

/// Full SVR-CFA output for one covariance matrix.
struct DoaEstimate {
    double phi_deg = 0.0;
    double theta_deg = 0.0;
    bool boresight = false;
    bool ambiguity_fallback = false;  // unwrap tie, principal values used as-is
    bool clamped = false;
};

/// phases -> unwrap -> normalize -> SVR azimuth -> CFA elevation.
DoaEstimate svr_cfa_estimate(const ArrayGeometry& geom, const Eigen::MatrixXcd& R,
                             const SvrModel& model, double boresight_tol,
                             const CfaOptions& cfa = {});

/// RMSE vs SNR at fixed N (Figs. 3-4 analog). Deterministic for a given
/// (config, seed) regardless of thread count. on_record, when set, is called
/// after each sweep point completes.
std::vector<RmseRecord> run_rmse_vs_snr(
    const ExperimentConfig& cfg,
    const std::function<void(const RmseRecord&)>& on_record = {});

/// RMSE vs N at fixed SNR (Figs. 5-6 analog); the SVR is retrained per N.
std::vector<RmseRecord> run_rmse_vs_n(
    const ExperimentConfig& cfg,
    const std::function<void(const RmseRecord&)>& on_record = {});

/// sqrt(mean(e^2)); rejects an empty list.
double compute_rmse(std::span<const double> errors_deg);

/// CSV + SVG + run manifest for one sweep. axis_label names the first CSV
/// column ("snr_db" or "n_elements").
void emit_artifacts(const std::vector<RmseRecord>& records, const std::string& axis_label,
                    const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Table-1 sweep over N: CSV (N, music_mults, svr_mults, gain_db) plus the
/// gain curve SVG.
void emit_complexity_artifacts(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Locale-independent shortest-round-trip float formatting used in every artifact.
std::string format_double(double value);

/// Hermitian covariance text files used by the estimate subcommand: first
/// line N, then N rows of 2N values (re im interleaved).
Eigen::MatrixXcd load_covariance_file(const std::filesystem::path& path);
void save_covariance_file(const Eigen::MatrixXcd& R, const std::filesystem::path& path);

}  // namespace svrdoa
