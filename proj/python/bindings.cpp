#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "svrdoa/bench_harness.hpp"

namespace py = pybind11;
using namespace svrdoa;

PYBIND11_MODULE(_core, m) {
    m.doc() = "SVR-CFA single-source 2D DOA estimation with a MUSIC baseline";

    py::register_exception<AmbiguityUnresolved>(m, "AmbiguityUnresolved");
    py::register_exception<AllPairsDegenerate>(m, "AllPairsDegenerate");
    py::register_exception<EvdNonConvergence>(m, "EvdNonConvergence");

    m.attr("NOISELESS_SNR_DB") = kNoiselessSnrDb;

    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def_static("uca", &ArrayGeometry::uca, py::arg("n_elements"),
                    py::arg("spacing_wavelengths") = 0.5)
        .def_static("uca_radius", &ArrayGeometry::uca_radius, py::arg("n_elements"),
                    py::arg("radius_wavelengths"))
        .def_readonly("n_elements", &ArrayGeometry::n_elements)
        .def_readonly("radius_wavelengths", &ArrayGeometry::radius_wavelengths)
        .def_readonly("element_azimuths", &ArrayGeometry::element_azimuths)
        .def("feature_length", &ArrayGeometry::feature_length);

    py::class_<SourceTruth>(m, "SourceTruth")
        .def(py::init<double, double>(), py::arg("theta_deg"), py::arg("phi_deg"))
        .def_readwrite("theta_deg", &SourceTruth::theta_deg)
        .def_readwrite("phi_deg", &SourceTruth::phi_deg);

    py::class_<SnapshotMatrix>(m, "SnapshotMatrix")
        .def_readonly("data", &SnapshotMatrix::data)
        .def("n_antennas", &SnapshotMatrix::n_antennas)
        .def("n_snapshots", &SnapshotMatrix::n_snapshots);

    m.def("steering_vector", &steering_vector, py::arg("geom"), py::arg("theta_deg"),
          py::arg("phi_deg"));
    m.def("simulate_snapshots", &simulate_snapshots, py::arg("geom"), py::arg("source"),
          py::arg("snr_db"), py::arg("n_snapshots"), py::arg("seed"));
    m.def("ideal_covariance", &ideal_covariance, py::arg("geom"), py::arg("source"),
          py::arg("sigma_s_sq"), py::arg("sigma_sq"));
    m.def("sample_covariance", &sample_covariance, py::arg("snapshots"));
    m.def(
        "sample_covariance_of",
        [](const Eigen::MatrixXcd& data) {
            SnapshotMatrix x;
            x.data = data;
            return sample_covariance(x);
        },
        py::arg("data"), "Sample covariance of a raw N x M snapshot array.");

    py::class_<PhaseVector>(m, "PhaseVector")
        .def_readonly("phases", &PhaseVector::phases)
        .def_readonly("pairs", &PhaseVector::pairs)
        .def_readonly("degenerate", &PhaseVector::degenerate)
        .def("n_pairs", &PhaseVector::n_pairs)
        .def("norm", &PhaseVector::norm);

    py::class_<FeatureVector>(m, "FeatureVector").def_readonly("z", &FeatureVector::z);

    py::class_<FeatureExtraction>(m, "FeatureExtraction")
        .def_readonly("feature", &FeatureExtraction::feature)
        .def_readonly("g_norm", &FeatureExtraction::g_norm)
        .def("boresight", &FeatureExtraction::boresight);

    m.def("extract_phase_vector", &extract_phase_vector, py::arg("R"));
    m.def("noiseless_phase", &noiseless_phase, py::arg("geom"), py::arg("theta_deg"),
          py::arg("phi_deg"));
    m.def("normalize_features", &normalize_features, py::arg("g"), py::arg("boresight_tol"));
    m.def("default_boresight_tol", &default_boresight_tol, py::arg("n_pairs"),
          py::arg("snr_db"), py::arg("n_snapshots"));
    m.def("unwrap_phases", &unwrap_phases, py::arg("g"), py::arg("geom"),
          py::arg("theta_max_deg"));

    py::enum_<BiasConvention>(m, "BiasConvention")
        .value("RESIDUAL_CENTERING", BiasConvention::kResidualCentering)
        .value("PAPER_LITERAL", BiasConvention::kPaperLiteral);

    py::class_<SvrHyperparams>(m, "SvrHyperparams")
        .def(py::init<>())
        .def_readwrite("c_bound", &SvrHyperparams::c_bound)
        .def_readwrite("epsilon_deg", &SvrHyperparams::epsilon_deg)
        .def_readwrite("kernel_width", &SvrHyperparams::kernel_width)
        .def_readwrite("qp_tolerance", &SvrHyperparams::qp_tolerance)
        .def_readwrite("max_iterations", &SvrHyperparams::max_iterations)
        .def_readwrite("bias_convention", &SvrHyperparams::bias_convention);

    py::class_<TrainingSet>(m, "TrainingSet")
        .def(py::init<>())
        .def_readwrite("features", &TrainingSet::features)
        .def_readwrite("targets_deg", &TrainingSet::targets_deg)
        .def("size", &TrainingSet::size);

    m.def("default_epsilon_deg", &default_epsilon_deg, py::arg("nominal_snr_db") = 10.0);
    m.def(
        "default_c_bound",
        [](const std::vector<double>& targets) { return default_c_bound(targets); },
        py::arg("targets_deg"));
    m.def("rbf_kernel", &rbf_kernel, py::arg("z1"), py::arg("z2"), py::arg("delta"));
    m.def("build_training_set", &build_training_set, py::arg("geom"),
          py::arg("phi_start_deg"), py::arg("phi_step_deg"), py::arg("phi_count"),
          py::arg("theta_train_deg"));

    py::class_<DualSolution>(m, "DualSolution")
        .def_readonly("alpha_up", &DualSolution::alpha_up)
        .def_readonly("alpha_down", &DualSolution::alpha_down)
        .def_readonly("coefficients", &DualSolution::coefficients)
        .def_readonly("converged", &DualSolution::converged)
        .def_readonly("iterations", &DualSolution::iterations)
        .def_readonly("kkt_violation", &DualSolution::kkt_violation)
        .def_readonly("objective", &DualSolution::objective)
        .def_readonly("objective_trace", &DualSolution::objective_trace);

    py::class_<BiasEstimate>(m, "BiasEstimate")
        .def_readonly("bias_deg", &BiasEstimate::bias_deg)
        .def_readonly("eta1", &BiasEstimate::eta1)
        .def_readonly("eta2", &BiasEstimate::eta2)
        .def_readonly("kkt_window_violation", &BiasEstimate::kkt_window_violation);

    m.def("solve_dual", &solve_dual, py::arg("train"), py::arg("hyperparams"));
    m.def("estimate_bias", &estimate_bias, py::arg("solution"), py::arg("train"),
          py::arg("hyperparams"));

    py::class_<SvrModel>(m, "SvrModel")
        .def_readonly("n_elements", &SvrModel::n_elements)
        .def_readonly("coefficients", &SvrModel::coefficients)
        .def_readonly("bias_deg", &SvrModel::bias_deg)
        .def_readonly("hyperparams", &SvrModel::hyperparams)
        .def_readonly("training_features", &SvrModel::training_features);

    m.def(
        "train_svr",
        [](const ArrayGeometry& geom, const TrainingSet& train, const SvrHyperparams& hp) {
            DualSolution sol;
            BiasEstimate bias;
            SvrModel model = train_svr(geom, train, hp, &sol, &bias);
            return py::make_tuple(model, sol, bias);
        },
        py::arg("geom"), py::arg("train"), py::arg("hyperparams"),
        "Returns (model, dual_solution, bias_estimate).");

    py::class_<AzimuthPrediction>(m, "AzimuthPrediction")
        .def_readonly("phi_deg", &AzimuthPrediction::phi_deg)
        .def_readonly("clamped", &AzimuthPrediction::clamped);

    m.def("predict_azimuth", &predict_azimuth, py::arg("model"), py::arg("z"));
    m.def("duality_gap", &duality_gap, py::arg("model"), py::arg("train"),
          py::arg("dual_objective"));
    m.def("save_model",
          [](const SvrModel& model, const std::string& path) { save_model(model, path); },
          py::arg("model"), py::arg("path"));
    m.def("load_model", [](const std::string& path) { return load_model(path); },
          py::arg("path"));

    py::class_<CfaOptions>(m, "CfaOptions")
        .def(py::init<>())
        .def_readwrite("gamma_min", &CfaOptions::gamma_min)
        .def_readwrite("trimmed_mean", &CfaOptions::trimmed_mean);

    py::class_<ElevationEstimate>(m, "ElevationEstimate")
        .def_readonly("theta_deg", &ElevationEstimate::theta_deg)
        .def_readonly("n_pairs_used", &ElevationEstimate::n_pairs_used)
        .def_readonly("clamped", &ElevationEstimate::clamped)
        .def_readonly("degenerate_pairs_dropped", &ElevationEstimate::degenerate_pairs_dropped);

    m.def("estimate_elevation", &estimate_elevation, py::arg("geom"), py::arg("phi_hat_deg"),
          py::arg("g"), py::arg("options") = CfaOptions{});

    py::class_<EigenDecomposition>(m, "EigenDecomposition")
        .def_readonly("eigenvalues", &EigenDecomposition::eigenvalues)
        .def_readonly("eigenvectors", &EigenDecomposition::eigenvectors);

    m.def("hermitian_evd", &hermitian_evd, py::arg("R"), py::arg("tol") = 1e-13);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("theta_start_deg", &GridSpec::theta_start_deg)
        .def_readwrite("theta_step_deg", &GridSpec::theta_step_deg)
        .def_readwrite("n_theta", &GridSpec::n_theta)
        .def_readwrite("phi_start_deg", &GridSpec::phi_start_deg)
        .def_readwrite("phi_step_deg", &GridSpec::phi_step_deg)
        .def_readwrite("n_phi", &GridSpec::n_phi);

    py::class_<MusicEstimate>(m, "MusicEstimate")
        .def_readonly("theta_deg", &MusicEstimate::theta_deg)
        .def_readonly("phi_deg", &MusicEstimate::phi_deg)
        .def_readonly("degenerate_subspace", &MusicEstimate::degenerate_subspace)
        .def_readonly("eigen_gap", &MusicEstimate::eigen_gap);

    m.def(
        "music_estimate",
        [](const Eigen::MatrixXcd& r, const ArrayGeometry& geom, const GridSpec& grid,
           int n_sources, double gap_tol) {
            return music_estimate(r, geom, grid, n_sources, gap_tol);
        },
        py::arg("R"), py::arg("geom"), py::arg("grid") = GridSpec{},
        py::arg("n_sources") = 1, py::arg("gap_tol") = 1e-12);

    m.def("music_cost", &music_cost, py::arg("n"), py::arg("m"), py::arg("n_theta"),
          py::arg("n_phi"));
    m.def("svr_cfa_cost", &svr_cfa_cost, py::arg("n"), py::arg("m"), py::arg("l"),
          py::arg("log2_p"));
    m.def("gain_db", &gain_db, py::arg("n"), py::arg("m"), py::arg("l"), py::arg("n_theta"),
          py::arg("n_phi"), py::arg("log2_p"));

    py::class_<DoaEstimate>(m, "DoaEstimate")
        .def_readonly("phi_deg", &DoaEstimate::phi_deg)
        .def_readonly("theta_deg", &DoaEstimate::theta_deg)
        .def_readonly("boresight", &DoaEstimate::boresight)
        .def_readonly("ambiguity_fallback", &DoaEstimate::ambiguity_fallback)
        .def_readonly("clamped", &DoaEstimate::clamped);

    m.def("svr_cfa_estimate", &svr_cfa_estimate, py::arg("geom"), py::arg("R"),
          py::arg("model"), py::arg("boresight_tol"), py::arg("cfa") = CfaOptions{});

    py::class_<RmseRecord>(m, "RmseRecord")
        .def_readonly("axis", &RmseRecord::axis)
        .def_readonly("rmse_phi_svr", &RmseRecord::rmse_phi_svr)
        .def_readonly("rmse_theta_svr", &RmseRecord::rmse_theta_svr)
        .def_readonly("rmse_phi_music", &RmseRecord::rmse_phi_music)
        .def_readonly("rmse_theta_music", &RmseRecord::rmse_theta_music)
        .def_readonly("n_trials", &RmseRecord::n_trials)
        .def_readonly("n_boresight", &RmseRecord::n_boresight)
        .def_readonly("n_clamp", &RmseRecord::n_clamp);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("n_elements", &ExperimentConfig::n_elements)
        .def_readwrite("spacing_wavelengths", &ExperimentConfig::spacing_wavelengths)
        .def_readwrite("train_phi_start_deg", &ExperimentConfig::train_phi_start_deg)
        .def_readwrite("train_phi_step_deg", &ExperimentConfig::train_phi_step_deg)
        .def_readwrite("train_phi_count", &ExperimentConfig::train_phi_count)
        .def_readwrite("theta_train_deg", &ExperimentConfig::theta_train_deg)
        .def_readwrite("theta_test_deg", &ExperimentConfig::theta_test_deg)
        .def_readwrite("test_phi_start_deg", &ExperimentConfig::test_phi_start_deg)
        .def_readwrite("test_phi_step_deg", &ExperimentConfig::test_phi_step_deg)
        .def_readwrite("test_phi_count", &ExperimentConfig::test_phi_count)
        .def_readwrite("snr_db_list", &ExperimentConfig::snr_db_list)
        .def_readwrite("n_elements_list", &ExperimentConfig::n_elements_list)
        .def_readwrite("snr_db_for_n_sweep", &ExperimentConfig::snr_db_for_n_sweep)
        .def_readwrite("n_trials", &ExperimentConfig::n_trials)
        .def_readwrite("n_snapshots", &ExperimentConfig::n_snapshots)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("c_bound", &ExperimentConfig::c_bound)
        .def_readwrite("epsilon_deg", &ExperimentConfig::epsilon_deg)
        .def_readwrite("kernel_width", &ExperimentConfig::kernel_width)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def("geometry", &ExperimentConfig::geometry)
        .def("hyperparams", &ExperimentConfig::hyperparams);

    m.def("load_config", [](const std::string& path) { return load_config(path); },
          py::arg("path"));
    m.def("compute_rmse",
          [](const std::vector<double>& errors) { return compute_rmse(errors); },
          py::arg("errors_deg"));
    m.def("run_rmse_vs_snr",
          [](const ExperimentConfig& cfg) { return run_rmse_vs_snr(cfg); }, py::arg("config"));
    m.def("run_rmse_vs_n", [](const ExperimentConfig& cfg) { return run_rmse_vs_n(cfg); },
          py::arg("config"));
    m.def(
        "emit_artifacts",
        [](const std::vector<RmseRecord>& records, const std::string& axis_label,
           const ExperimentConfig& cfg, const std::string& out_dir) {
            emit_artifacts(records, axis_label, cfg, out_dir);
        },
        py::arg("records"), py::arg("axis_label"), py::arg("config"), py::arg("out_dir"));
}
