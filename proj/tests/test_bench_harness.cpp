#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "svrdoa/bench_harness.hpp"

using namespace svrdoa;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.n_trials = 3;
    cfg.n_snapshots = 10;
    cfg.test_phi_count = 5;
    cfg.snr_db_list = {10.0};
    cfg.n_elements_list = {3, 4};
    cfg.threads = 2;
    return cfg;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string records_to_string(const std::vector<RmseRecord>& records) {
    std::string s;
    for (const RmseRecord& r : records) {
        s += format_double(r.axis) + "|" + format_double(r.rmse_phi_svr) + "|" +
             format_double(r.rmse_theta_svr) + "|" + format_double(r.rmse_phi_music) + "|" +
             format_double(r.rmse_theta_music) + "|" + std::to_string(r.n_trials) + "|" +
             std::to_string(r.n_boresight) + "|" + std::to_string(r.n_clamp) + "\n";
    }
    return s;
}

}  // namespace

TEST_CASE("rmse of a plain error list") {
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    CHECK(compute_rmse(zeros) == 0.0);
    const std::vector<double> pyth{3.0, 4.0};
    CHECK(compute_rmse(pyth) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-15));
    const std::vector<double> single{-2.5};
    CHECK(compute_rmse(single) == 2.5);
    CHECK_THROWS_AS(compute_rmse({}), std::invalid_argument);
}

TEST_CASE("config round-trips through its own echo") {
    ExperimentConfig cfg = tiny_config();
    cfg.seed = 987654321;
    cfg.epsilon_deg = 0.25;
    cfg.out_dir = "results";
    std::istringstream echo(config_to_string(cfg));
    const ExperimentConfig back = parse_config(echo);
    CHECK(back.n_elements == cfg.n_elements);
    CHECK(back.seed == cfg.seed);
    CHECK(back.epsilon_deg == cfg.epsilon_deg);
    CHECK(back.n_trials == cfg.n_trials);
    CHECK(back.test_phi_count == cfg.test_phi_count);
    CHECK(back.snr_db_list == cfg.snr_db_list);
    CHECK(back.n_elements_list == cfg.n_elements_list);
    CHECK(back.out_dir == cfg.out_dir);
    CHECK(back.music_grid.n_phi == cfg.music_grid.n_phi);
}

TEST_CASE("config parser rejects unknown keys and malformed values") {
    std::istringstream unknown("[array]\nn_antennas = 3\n");
    CHECK_THROWS_AS(parse_config(unknown), std::invalid_argument);
    std::istringstream bad_number("[trials]\nn_trials = many\n");
    CHECK_THROWS_AS(parse_config(bad_number), std::invalid_argument);
    std::istringstream no_equals("[trials]\nn_trials 3\n");
    CHECK_THROWS_AS(parse_config(no_equals), std::invalid_argument);

    std::istringstream commented("# a comment\n[trials]\nn_trials = 7  # inline\n");
    CHECK(parse_config(commented).n_trials == 7);

    std::istringstream empty("");
    const ExperimentConfig defaults = parse_config(empty);
    CHECK(defaults.n_elements == 3);
    CHECK(defaults.train_phi_count == 181);
    CHECK(defaults.theta_test_deg == 60.5);
}

TEST_CASE("derived hyperparameters follow the training grid") {
    const ExperimentConfig cfg = tiny_config();
    const SvrHyperparams hp = cfg.hyperparams();
    CHECK(std::abs(hp.c_bound - 247.18) <= 0.01);
    CHECK(hp.epsilon_deg == doctest::Approx(1.0043 * std::sqrt(0.1)).epsilon(1e-12));

    ExperimentConfig overridden = cfg;
    overridden.c_bound = 100.0;
    overridden.epsilon_deg = 0.5;
    CHECK(overridden.hyperparams().c_bound == 100.0);
    CHECK(overridden.hyperparams().epsilon_deg == 0.5);
}

TEST_CASE("noiseless pipeline estimate stays near the truth") {
    const ExperimentConfig cfg = tiny_config();
    const ArrayGeometry geom = cfg.geometry();
    const TrainingSet train = build_training_set(geom, 0.0, 1.0, 181, 30.0);
    const SvrModel model = train_svr(geom, train, cfg.hyperparams());

    const Eigen::MatrixXcd r = ideal_covariance(geom, {60.5, 90.5}, 1.0, 0.0);
    const DoaEstimate est = svr_cfa_estimate(geom, r, model, 1e-6);
    CHECK_FALSE(est.boresight);
    CHECK(std::abs(est.phi_deg - 90.5) < 0.5);
    CHECK(std::abs(est.theta_deg - 60.5) < 0.5);

    const Eigen::MatrixXcd bore = ideal_covariance(geom, {0.0, 10.0}, 1.0, 0.0);
    const DoaEstimate bore_est = svr_cfa_estimate(geom, bore, model, 1e-6);
    CHECK(bore_est.boresight);
    CHECK(bore_est.theta_deg == 0.0);
}

TEST_CASE("bench runs are deterministic across repeats and thread counts") {
    ExperimentConfig cfg = tiny_config();
    const std::vector<RmseRecord> first = run_rmse_vs_snr(cfg);
    const std::vector<RmseRecord> second = run_rmse_vs_snr(cfg);
    CHECK(records_to_string(first) == records_to_string(second));

    cfg.threads = 1;
    const std::vector<RmseRecord> serial = run_rmse_vs_snr(cfg);
    CHECK(records_to_string(first) == records_to_string(serial));

    ExperimentConfig other_seed = tiny_config();
    other_seed.seed += 1;
    CHECK(records_to_string(run_rmse_vs_snr(other_seed)) != records_to_string(first));
}

TEST_CASE("error accounting reconciles") {
    ExperimentConfig cfg = tiny_config();
    const std::vector<RmseRecord> records = run_rmse_vs_snr(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].n_trials == static_cast<long>(cfg.n_trials) * cfg.test_phi_count);
    CHECK(records[0].n_boresight == 0);  // theta = 60.5 never looks like boresight
    CHECK(records[0].rmse_phi_svr > 0.0);
    CHECK(records[0].rmse_phi_music > 0.0);
}

TEST_CASE("noiseless sweep hits the quantization floor") {
    ExperimentConfig cfg = tiny_config();
    cfg.snr_db_list = {kNoiselessSnrDb};
    cfg.n_trials = 1;  // no randomness left to average over
    cfg.test_phi_count = 11;
    const std::vector<RmseRecord> records = run_rmse_vs_snr(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].rmse_phi_svr < 0.5);
    // MUSIC cannot beat its 1-degree grid on k+0.5 truths.
    CHECK(records[0].rmse_phi_music == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("the two sweeps agree at their shared operating point") {
    // N = 3 at 10 dB appears in both sweeps with independent seed streams;
    // the RMSEs must match within Monte Carlo tolerance.
    ExperimentConfig cfg;
    cfg.n_trials = 20;
    cfg.threads = 2;
    cfg.snr_db_list = {10.0};
    cfg.n_elements_list = {3};
    const RmseRecord by_snr = run_rmse_vs_snr(cfg).front();
    const RmseRecord by_n = run_rmse_vs_n(cfg).front();
    CHECK(std::abs(by_snr.rmse_phi_svr - by_n.rmse_phi_svr) < 0.2);
    CHECK(std::abs(by_snr.rmse_theta_svr - by_n.rmse_theta_svr) < 0.4);
    CHECK(std::abs(by_snr.rmse_phi_music - by_n.rmse_phi_music) < 0.2);
    CHECK(std::abs(by_snr.rmse_theta_music - by_n.rmse_theta_music) < 0.4);
}

TEST_CASE("boresight truth is flagged and excluded from the azimuth error") {
    ExperimentConfig cfg = tiny_config();
    cfg.theta_test_deg = 0.0;
    cfg.snr_db_list = {kNoiselessSnrDb};
    cfg.n_trials = 2;
    cfg.test_phi_count = 3;
    const RmseRecord rec = run_rmse_vs_snr(cfg).front();
    CHECK(rec.n_boresight == rec.n_trials);  // every trial takes the shortcut
    CHECK(rec.rmse_phi_svr == 0.0);          // no azimuth error entered
    CHECK(rec.rmse_theta_svr == 0.0);        // theta_hat = 0 is exact here
    CHECK(rec.rmse_theta_music >= 1.0);      // MUSIC's grid starts at 1 degree
}

TEST_CASE("rmse-vs-n retrains per N and reports every point") {
    ExperimentConfig cfg = tiny_config();
    cfg.n_trials = 2;
    cfg.test_phi_count = 3;
    int called = 0;
    const std::vector<RmseRecord> records =
        run_rmse_vs_n(cfg, [&](const RmseRecord&) { ++called; });
    REQUIRE(records.size() == 2);
    CHECK(called == 2);
    CHECK(records[0].axis == 3.0);
    CHECK(records[1].axis == 4.0);
}

TEST_CASE("artifact emission: csv bytes, svg structure, manifest") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "svrdoa_test_artifacts";
    std::filesystem::remove_all(dir);

    ExperimentConfig cfg = tiny_config();
    SUBCASE("empty record list gives a header-only csv and no svg") {
        emit_artifacts({}, "snr_db", cfg, dir);
        CHECK(read_file(dir / "rmse_vs_snr.csv") ==
              "snr_db,rmse_phi_svr,rmse_theta_svr,rmse_phi_music,rmse_theta_music,"
              "n_trials,n_boresight,n_clamp\n");
        CHECK_FALSE(std::filesystem::exists(dir / "rmse_vs_snr.svg"));
        CHECK(std::filesystem::exists(dir / "rmse_vs_snr_manifest.txt"));
    }

    SUBCASE("two records draw exactly four polylines and rewrite identically") {
        RmseRecord a;
        a.axis = 0.0;
        a.rmse_phi_svr = 1.0;
        a.rmse_theta_svr = 0.5;
        a.rmse_phi_music = 1.1;
        a.rmse_theta_music = 0.4;
        a.n_trials = 10;
        RmseRecord b = a;
        b.axis = 10.0;
        b.rmse_phi_svr = 0.3;

        emit_artifacts({a, b}, "snr_db", cfg, dir);
        const std::string csv1 = read_file(dir / "rmse_vs_snr.csv");
        const std::string svg = read_file(dir / "rmse_vs_snr.svg");
        size_t count = 0;
        for (size_t pos = svg.find("<polyline"); pos != std::string::npos;
             pos = svg.find("<polyline", pos + 1)) {
            ++count;
        }
        CHECK(count == 4);

        emit_artifacts({a, b}, "snr_db", cfg, dir);
        CHECK(read_file(dir / "rmse_vs_snr.csv") == csv1);

        const std::string manifest = read_file(dir / "rmse_vs_snr_manifest.txt");
        CHECK(manifest.find("seed " + std::to_string(cfg.seed)) != std::string::npos);
        CHECK(manifest.find("[array]") != std::string::npos);
        CHECK(manifest.find("git ") != std::string::npos);
    }

    std::filesystem::remove_all(dir);
}

TEST_CASE("complexity artifacts list every N with the exact counts") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "svrdoa_test_complexity";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg = tiny_config();
    cfg.n_snapshots = 30;  // the published counts assume M = 30
    cfg.complexity_n_min = 3;
    cfg.complexity_n_max = 5;
    emit_complexity_artifacts(cfg, dir);
    const std::string csv = read_file(dir / "complexity.csv");
    CHECK(csv.find("n_elements,music_mults,svr_mults,gain_db\n") == 0);
    CHECK(csv.find("3,442224,33241,") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "complexity_gain.svg"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("covariance files round-trip") {
    const ArrayGeometry geom = ArrayGeometry::uca(3);
    const Eigen::MatrixXcd r =
        sample_covariance(simulate_snapshots(geom, {60.5, 90.5}, 10.0, 30, 9));
    const std::filesystem::path path =
        std::filesystem::temp_directory_path() / "svrdoa_cov_roundtrip.txt";
    save_covariance_file(r, path);
    const Eigen::MatrixXcd back = load_covariance_file(path);
    std::filesystem::remove(path);
    CHECK(back.rows() == 3);
    CHECK((back - r).cwiseAbs().maxCoeff() == 0.0);  // shortest round-trip formatting
    CHECK_THROWS_AS(load_covariance_file("/nonexistent/cov.txt"), std::runtime_error);
}
