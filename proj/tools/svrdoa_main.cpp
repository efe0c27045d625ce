// Command-line front end: train a model, estimate a single DOA, run the
// Monte Carlo benchmarks, or dump the complexity tables.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "svrdoa/bench_harness.hpp"

namespace {

using namespace svrdoa;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNonConvergence = 2;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string model_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

ExperimentConfig effective_config(const CommonOpts& opts) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = load_config(opts.config_path);
    }
    if (opts.seed_set) {
        cfg.seed = opts.seed;
    }
    if (opts.threads > 0) {
        cfg.threads = opts.threads;
    }
    if (!opts.out_dir.empty()) {
        cfg.out_dir = opts.out_dir;
    }
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_model) {
    cmd->add_option("--config", opts.config_path, "experiment config file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = all cores)");
    cmd->add_option("--seed", opts.seed, "master seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    if (with_model) {
        cmd->add_option("--model", opts.model_path, "model file path");
    }
}

int cmd_train(const CommonOpts& opts) {
    const ExperimentConfig cfg = effective_config(opts);
    if (opts.model_path.empty()) {
        std::cerr << "train: --model PATH is required\n";
        return kExitUsage;
    }
    const ArrayGeometry geom = cfg.geometry();
    const TrainingSet train =
        build_training_set(geom, cfg.train_phi_start_deg, cfg.train_phi_step_deg,
                           cfg.train_phi_count, cfg.theta_train_deg);
    DualSolution sol;
    BiasEstimate bias;
    const SvrModel model = train_svr(geom, train, cfg.hyperparams(), &sol, &bias);

    std::cerr << "trained L=" << train.size() << " C=" << format_double(model.hyperparams.c_bound)
              << " epsilon=" << format_double(model.hyperparams.epsilon_deg)
              << " delta=" << format_double(model.hyperparams.kernel_width)
              << " bias=" << format_double(model.bias_deg) << "\n";
    std::cerr << "solver: iterations=" << sol.iterations
              << " kkt_violation=" << format_double(sol.kkt_violation)
              << " objective=" << format_double(sol.objective)
              << " duality_gap=" << format_double(duality_gap(model, train, sol.objective))
              << "\n";
    if (bias.kkt_window_violation) {
        std::cerr << "note: printed-form bias window [" << format_double(bias.eta1) << ", "
                  << format_double(bias.eta2) << "] does not admit the bias\n";
    }
    save_model(model, opts.model_path);
    if (!sol.converged) {
        std::cerr << "train: dual solver did not converge\n";
        return kExitNonConvergence;
    }
    std::cout << opts.model_path << "\n";
    return kExitOk;
}

struct EstimateOpts {
    std::string covariance_path;
    double theta_deg = 60.5;
    double phi_deg = 90.5;
    bool scenario_set = false;
    double snr_db = 10.0;
    int n_snapshots = 0;
};

int cmd_estimate(const CommonOpts& opts, const EstimateOpts& est_opts) {
    const ExperimentConfig cfg = effective_config(opts);
    if (opts.model_path.empty()) {
        std::cerr << "estimate: --model PATH is required\n";
        return kExitUsage;
    }
    const SvrModel model = load_model(opts.model_path);

    Eigen::MatrixXcd r;
    double snr_db = est_opts.snr_db;
    if (!est_opts.covariance_path.empty()) {
        r = load_covariance_file(est_opts.covariance_path);
    } else if (est_opts.scenario_set) {
        const ArrayGeometry geom = cfg.geometry_for(model.n_elements);
        const int m = est_opts.n_snapshots > 0 ? est_opts.n_snapshots : cfg.n_snapshots;
        const SnapshotMatrix x = simulate_snapshots(
            geom, SourceTruth{est_opts.theta_deg, est_opts.phi_deg}, snr_db, m, cfg.seed);
        r = sample_covariance(x);
    } else {
        std::cerr << "estimate: give --covariance FILE or --theta/--phi/--snr\n";
        return kExitUsage;
    }

    if (r.rows() != model.n_elements) {
        std::cerr << "estimate: covariance order " << r.rows() << " does not match model N="
                  << model.n_elements << "\n";
        return kExitUsage;
    }
    const ArrayGeometry geom = cfg.geometry_for(model.n_elements);
    const double tol =
        default_boresight_tol(geom.feature_length(), snr_db, cfg.n_snapshots);
    const DoaEstimate est =
        svr_cfa_estimate(geom, r, model, tol, CfaOptions{cfg.gamma_min, cfg.trimmed_mean});
    std::cout << "phi_deg=" << format_double(est.phi_deg)
              << " theta_deg=" << format_double(est.theta_deg)
              << " boresight=" << (est.boresight ? 1 : 0)
              << " ambiguity=" << (est.ambiguity_fallback ? 1 : 0)
              << " clamped=" << (est.clamped ? 1 : 0) << "\n";
    return kExitOk;
}

int cmd_bench(const CommonOpts& opts, bool vs_snr) {
    const ExperimentConfig cfg = effective_config(opts);
    const auto progress = [](const RmseRecord& r) {
        std::cerr << "point " << format_double(r.axis) << ": svr(phi=" << format_double(r.rmse_phi_svr)
                  << " theta=" << format_double(r.rmse_theta_svr)
                  << ") music(phi=" << format_double(r.rmse_phi_music)
                  << " theta=" << format_double(r.rmse_theta_music) << ")\n";
    };
    const std::vector<RmseRecord> records =
        vs_snr ? run_rmse_vs_snr(cfg, progress) : run_rmse_vs_n(cfg, progress);
    emit_artifacts(records, vs_snr ? "snr_db" : "n_elements", cfg, cfg.out_dir);
    std::cout << cfg.out_dir << "/" << (vs_snr ? "rmse_vs_snr.csv" : "rmse_vs_n.csv") << "\n";
    return kExitOk;
}

int cmd_complexity(const CommonOpts& opts) {
    const ExperimentConfig cfg = effective_config(opts);
    emit_complexity_artifacts(cfg, cfg.out_dir);
    std::cout << cfg.out_dir << "/complexity.csv" << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SVR-CFA single-source 2D DOA estimator and MUSIC benchmark"};
    app.require_subcommand(1);

    CommonOpts train_opts;
    CLI::App* train = app.add_subcommand("train", "train the azimuth SVR and write the model");
    add_common(train, train_opts, true);

    CommonOpts est_common;
    EstimateOpts est_opts;
    CLI::App* estimate =
        app.add_subcommand("estimate", "one covariance or simulated scenario -> DOA");
    add_common(estimate, est_common, true);
    estimate->add_option("--covariance", est_opts.covariance_path, "covariance text file");
    estimate->add_option("--theta", est_opts.theta_deg, "true elevation for simulation")
        ->each([&](const std::string&) { est_opts.scenario_set = true; });
    estimate->add_option("--phi", est_opts.phi_deg, "true azimuth for simulation")
        ->each([&](const std::string&) { est_opts.scenario_set = true; });
    estimate->add_option("--snr", est_opts.snr_db, "scenario SNR in dB");
    estimate->add_option("--snapshots", est_opts.n_snapshots, "scenario snapshot count");

    CommonOpts bench_opts;
    CLI::App* bench = app.add_subcommand("bench", "Monte Carlo RMSE sweeps");
    bench->require_subcommand(1);
    CLI::App* vs_snr = bench->add_subcommand("rmse-vs-snr", "RMSE against SNR");
    CLI::App* vs_n = bench->add_subcommand("rmse-vs-n", "RMSE against array size");
    add_common(vs_snr, bench_opts, false);
    add_common(vs_n, bench_opts, false);

    CommonOpts complexity_opts;
    CLI::App* complexity = app.add_subcommand("complexity", "Table-1 cost models as CSV");
    add_common(complexity, complexity_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (train->parsed()) {
            return cmd_train(train_opts);
        }
        if (estimate->parsed()) {
            return cmd_estimate(est_common, est_opts);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_opts, vs_snr->parsed());
        }
        if (complexity->parsed()) {
            return cmd_complexity(complexity_opts);
        }
    } catch (const EvdNonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
