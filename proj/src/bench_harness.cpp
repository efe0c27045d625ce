#include "svrdoa/bench_harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <thread>

#ifndef SVRDOA_GIT_DESCRIBE
#define SVRDOA_GIT_DESCRIBE "unknown"
#endif

namespace svrdoa {

namespace {

// splitmix64 steps; decorrelates the per-trial streams from the master seed
// so results do not depend on scheduling order.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t sweep, std::uint64_t point,
                          std::uint64_t trial) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ sweep);
    h = mix64(h ^ point);
    h = mix64(h ^ trial);
    return h;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& raw, const std::string& key) {
    std::string s = trim(raw);
    if (!s.empty() && s.front() == '+') {
        s.erase(s.begin());
    }
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw std::invalid_argument("config: bad number for '" + key + "': '" + raw + "'");
    }
    return v;
}

long to_long(const std::string& raw, const std::string& key) {
    const double v = to_double(raw, key);
    if (v != std::floor(v)) {
        throw std::invalid_argument("config: expected integer for '" + key + "'");
    }
    return static_cast<long>(v);
}

std::vector<double> to_double_list(const std::string& raw, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(to_double(item, key));
    }
    if (out.empty()) {
        throw std::invalid_argument("config: empty list for '" + key + "'");
    }
    return out;
}

}  // namespace

ArrayGeometry ExperimentConfig::geometry() const { return geometry_for(n_elements); }

ArrayGeometry ExperimentConfig::geometry_for(int n) const {
    return ArrayGeometry::uca(n, spacing_wavelengths);
}

SvrHyperparams ExperimentConfig::hyperparams() const {
    SvrHyperparams hp;
    if (c_bound > 0.0) {
        hp.c_bound = c_bound;
    } else {
        std::vector<double> targets(train_phi_count);
        for (int i = 0; i < train_phi_count; ++i) {
            targets[i] = train_phi_start_deg + i * train_phi_step_deg;
        }
        hp.c_bound = default_c_bound(targets);
    }
    hp.epsilon_deg = epsilon_deg >= 0.0 ? epsilon_deg : default_epsilon_deg(nominal_snr_db);
    hp.kernel_width = kernel_width;
    hp.qp_tolerance = qp_tolerance;
    hp.max_iterations = max_iterations;
    return hp;
}

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
    ExperimentConfig cfg;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                            ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "array.n_elements") {
            cfg.n_elements = static_cast<int>(to_long(value, key));
        } else if (key == "array.spacing_wavelengths") {
            cfg.spacing_wavelengths = to_double(value, key);
        } else if (key == "training.phi_start_deg") {
            cfg.train_phi_start_deg = to_double(value, key);
        } else if (key == "training.phi_step_deg") {
            cfg.train_phi_step_deg = to_double(value, key);
        } else if (key == "training.phi_count") {
            cfg.train_phi_count = static_cast<int>(to_long(value, key));
        } else if (key == "training.theta_deg") {
            cfg.theta_train_deg = to_double(value, key);
        } else if (key == "test.theta_deg") {
            cfg.theta_test_deg = to_double(value, key);
        } else if (key == "test.phi_start_deg") {
            cfg.test_phi_start_deg = to_double(value, key);
        } else if (key == "test.phi_step_deg") {
            cfg.test_phi_step_deg = to_double(value, key);
        } else if (key == "test.phi_count") {
            cfg.test_phi_count = static_cast<int>(to_long(value, key));
        } else if (key == "sweep.snr_db") {
            cfg.snr_db_list = to_double_list(value, key);
        } else if (key == "sweep.n_elements") {
            cfg.n_elements_list.clear();
            for (double v : to_double_list(value, key)) {
                cfg.n_elements_list.push_back(static_cast<int>(v));
            }
        } else if (key == "sweep.snr_db_for_n_sweep") {
            cfg.snr_db_for_n_sweep = to_double(value, key);
        } else if (key == "trials.n_trials") {
            cfg.n_trials = static_cast<int>(to_long(value, key));
        } else if (key == "trials.n_snapshots") {
            cfg.n_snapshots = static_cast<int>(to_long(value, key));
        } else if (key == "trials.seed") {
            cfg.seed = static_cast<std::uint64_t>(to_long(value, key));
        } else if (key == "svr.c_bound") {
            cfg.c_bound = to_double(value, key);
        } else if (key == "svr.epsilon_deg") {
            cfg.epsilon_deg = to_double(value, key);
        } else if (key == "svr.nominal_snr_db") {
            cfg.nominal_snr_db = to_double(value, key);
        } else if (key == "svr.kernel_width") {
            cfg.kernel_width = to_double(value, key);
        } else if (key == "svr.qp_tolerance") {
            cfg.qp_tolerance = to_double(value, key);
        } else if (key == "svr.max_iterations") {
            cfg.max_iterations = to_long(value, key);
        } else if (key == "estimator.gamma_min") {
            cfg.gamma_min = to_double(value, key);
        } else if (key == "estimator.trimmed_mean") {
            cfg.trimmed_mean = to_long(value, key) != 0;
        } else if (key == "music.theta_start_deg") {
            cfg.music_grid.theta_start_deg = to_double(value, key);
        } else if (key == "music.theta_step_deg") {
            cfg.music_grid.theta_step_deg = to_double(value, key);
        } else if (key == "music.n_theta") {
            cfg.music_grid.n_theta = static_cast<int>(to_long(value, key));
        } else if (key == "music.phi_start_deg") {
            cfg.music_grid.phi_start_deg = to_double(value, key);
        } else if (key == "music.phi_step_deg") {
            cfg.music_grid.phi_step_deg = to_double(value, key);
        } else if (key == "music.n_phi") {
            cfg.music_grid.n_phi = static_cast<int>(to_long(value, key));
        } else if (key == "complexity.log2_p") {
            cfg.log2_p = static_cast<int>(to_long(value, key));
        } else if (key == "complexity.n_min") {
            cfg.complexity_n_min = static_cast<int>(to_long(value, key));
        } else if (key == "complexity.n_max") {
            cfg.complexity_n_max = static_cast<int>(to_long(value, key));
        } else if (key == "run.threads") {
            cfg.threads = static_cast<int>(to_long(value, key));
        } else if (key == "run.out_dir") {
            cfg.out_dir = value;
        } else {
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        }
    }
    if (cfg.n_trials < 1 || cfg.n_snapshots < 1 || cfg.test_phi_count < 1 ||
        cfg.snr_db_list.empty() || cfg.n_elements_list.empty()) {
        throw std::invalid_argument(origin + ": config fails basic validation");
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open " + path.string());
    }
    return parse_config(in, path.string());
}

std::string format_double(double value) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, p);
}

std::string config_to_string(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[array]\n";
    out << "n_elements = " << cfg.n_elements << "\n";
    out << "spacing_wavelengths = " << format_double(cfg.spacing_wavelengths) << "\n";
    out << "[training]\n";
    out << "phi_start_deg = " << format_double(cfg.train_phi_start_deg) << "\n";
    out << "phi_step_deg = " << format_double(cfg.train_phi_step_deg) << "\n";
    out << "phi_count = " << cfg.train_phi_count << "\n";
    out << "theta_deg = " << format_double(cfg.theta_train_deg) << "\n";
    out << "[test]\n";
    out << "theta_deg = " << format_double(cfg.theta_test_deg) << "\n";
    out << "phi_start_deg = " << format_double(cfg.test_phi_start_deg) << "\n";
    out << "phi_step_deg = " << format_double(cfg.test_phi_step_deg) << "\n";
    out << "phi_count = " << cfg.test_phi_count << "\n";
    out << "[sweep]\n";
    out << "snr_db = ";
    for (size_t i = 0; i < cfg.snr_db_list.size(); ++i) {
        out << (i ? "," : "") << format_double(cfg.snr_db_list[i]);
    }
    out << "\n";
    out << "n_elements = ";
    for (size_t i = 0; i < cfg.n_elements_list.size(); ++i) {
        out << (i ? "," : "") << cfg.n_elements_list[i];
    }
    out << "\n";
    out << "snr_db_for_n_sweep = " << format_double(cfg.snr_db_for_n_sweep) << "\n";
    out << "[trials]\n";
    out << "n_trials = " << cfg.n_trials << "\n";
    out << "n_snapshots = " << cfg.n_snapshots << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "[svr]\n";
    out << "c_bound = " << format_double(cfg.c_bound) << "\n";
    out << "epsilon_deg = " << format_double(cfg.epsilon_deg) << "\n";
    out << "nominal_snr_db = " << format_double(cfg.nominal_snr_db) << "\n";
    out << "kernel_width = " << format_double(cfg.kernel_width) << "\n";
    out << "qp_tolerance = " << format_double(cfg.qp_tolerance) << "\n";
    out << "max_iterations = " << cfg.max_iterations << "\n";
    out << "[estimator]\n";
    out << "gamma_min = " << format_double(cfg.gamma_min) << "\n";
    out << "trimmed_mean = " << (cfg.trimmed_mean ? 1 : 0) << "\n";
    out << "[music]\n";
    out << "theta_start_deg = " << format_double(cfg.music_grid.theta_start_deg) << "\n";
    out << "theta_step_deg = " << format_double(cfg.music_grid.theta_step_deg) << "\n";
    out << "n_theta = " << cfg.music_grid.n_theta << "\n";
    out << "phi_start_deg = " << format_double(cfg.music_grid.phi_start_deg) << "\n";
    out << "phi_step_deg = " << format_double(cfg.music_grid.phi_step_deg) << "\n";
    out << "n_phi = " << cfg.music_grid.n_phi << "\n";
    out << "[complexity]\n";
    out << "log2_p = " << cfg.log2_p << "\n";
    out << "n_min = " << cfg.complexity_n_min << "\n";
    out << "n_max = " << cfg.complexity_n_max << "\n";
    out << "[run]\n";
    out << "threads = " << cfg.threads << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    return out.str();
}

double compute_rmse(std::span<const double> errors_deg) {
    if (errors_deg.empty()) {
        throw std::invalid_argument("compute_rmse: empty error list");
    }
    double ssq = 0.0;
    for (double e : errors_deg) {
        ssq += e * e;
    }
    return std::sqrt(ssq / static_cast<double>(errors_deg.size()));
}

DoaEstimate svr_cfa_estimate(const ArrayGeometry& geom, const Eigen::MatrixXcd& R,
                             const SvrModel& model, double boresight_tol,
                             const CfaOptions& cfa) {
    DoaEstimate est;
    PhaseVector g = extract_phase_vector(R);
    try {
        g = unwrap_phases(g, geom, 90.0);
    } catch (const AmbiguityUnresolved&) {
        est.ambiguity_fallback = true;  // keep principal values
    }

    const FeatureExtraction fx = normalize_features(g, boresight_tol);
    if (fx.boresight()) {
        est.boresight = true;
        est.theta_deg = 0.0;
        est.phi_deg = std::numeric_limits<double>::quiet_NaN();
        return est;
    }

    const AzimuthPrediction phi = predict_azimuth(model, *fx.feature);
    est.phi_deg = phi.phi_deg;
    est.clamped = phi.clamped;
    try {
        const ElevationEstimate theta = estimate_elevation(geom, phi.phi_deg, g, cfa);
        est.theta_deg = theta.theta_deg;
        est.clamped = est.clamped || theta.clamped;
    } catch (const AllPairsDegenerate&) {
        est.theta_deg = 0.0;
        est.clamped = true;
    }
    return est;
}

namespace {

struct TrialOutcome {
    double err_phi_svr = 0.0;
    double err_theta_svr = 0.0;
    double err_phi_music = 0.0;
    double err_theta_music = 0.0;
    bool boresight = false;
    bool clamped = false;
};

// One sweep point: n_trials trials at every test azimuth, SVR-CFA and MUSIC
// fed the same sample covariance. Trial results land in pre-assigned slots so
// the reduction is independent of the thread schedule.
RmseRecord run_point(const ExperimentConfig& cfg, const ArrayGeometry& geom,
                     const SvrModel& model, const SteeringTable& table, double snr_db,
                     double axis_value, std::uint64_t sweep_index) {
    const int n_points = cfg.test_phi_count;
    const long total = static_cast<long>(n_points) * cfg.n_trials;
    std::vector<TrialOutcome> outcomes(total);

    const double boresight_tol =
        default_boresight_tol(geom.feature_length(), snr_db, cfg.n_snapshots);
    const CfaOptions cfa{cfg.gamma_min, cfg.trimmed_mean};
    const double theta_true = cfg.theta_test_deg;

    std::atomic<long> next{0};
    auto worker = [&]() {
        for (long idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
            const int point = static_cast<int>(idx / cfg.n_trials);
            const int trial = static_cast<int>(idx % cfg.n_trials);
            const double phi_true = cfg.test_phi_start_deg + point * cfg.test_phi_step_deg;

            const std::uint64_t seed = derive_seed(cfg.seed, sweep_index, point, trial);
            const SnapshotMatrix x = simulate_snapshots(
                geom, SourceTruth{theta_true, phi_true}, snr_db, cfg.n_snapshots, seed);
            const Eigen::MatrixXcd r = sample_covariance(x);

            TrialOutcome& out = outcomes[idx];
            const DoaEstimate svr = svr_cfa_estimate(geom, r, model, boresight_tol, cfa);
            out.boresight = svr.boresight;
            out.clamped = svr.clamped;
            if (!svr.boresight) {
                out.err_phi_svr = svr.phi_deg - phi_true;
            }
            out.err_theta_svr = svr.theta_deg - theta_true;

            const MusicEstimate music =
                music_estimate(r, geom, table.grid, 1, 1e-12, &table);
            out.err_phi_music = music.phi_deg - phi_true;
            out.err_theta_music = music.theta_deg - theta_true;
        }
    };

    long n_threads = cfg.threads > 0 ? cfg.threads
                                     : static_cast<long>(std::thread::hardware_concurrency());
    n_threads = std::max(1L, std::min(n_threads, total));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    RmseRecord rec;
    rec.axis = axis_value;
    rec.n_trials = total;
    std::vector<double> phi_svr, theta_svr, phi_music, theta_music;
    phi_svr.reserve(total);
    theta_svr.reserve(total);
    phi_music.reserve(total);
    theta_music.reserve(total);
    for (const TrialOutcome& out : outcomes) {
        if (out.boresight) {
            ++rec.n_boresight;  // azimuth undefined, excluded from RMSE
        } else {
            phi_svr.push_back(out.err_phi_svr);
        }
        if (out.clamped) {
            ++rec.n_clamp;
        }
        theta_svr.push_back(out.err_theta_svr);
        phi_music.push_back(out.err_phi_music);
        theta_music.push_back(out.err_theta_music);
        if (std::abs(out.err_phi_svr) > 181.0 || std::abs(out.err_phi_music) > 181.0) {
            throw std::logic_error("bench: azimuth error outside the FOV metric");
        }
    }
    rec.rmse_phi_svr = phi_svr.empty() ? 0.0 : compute_rmse(phi_svr);
    rec.rmse_theta_svr = compute_rmse(theta_svr);
    rec.rmse_phi_music = compute_rmse(phi_music);
    rec.rmse_theta_music = compute_rmse(theta_music);
    return rec;
}

SvrModel train_from_config(const ExperimentConfig& cfg, const ArrayGeometry& geom) {
    const TrainingSet train =
        build_training_set(geom, cfg.train_phi_start_deg, cfg.train_phi_step_deg,
                           cfg.train_phi_count, cfg.theta_train_deg);
    return train_svr(geom, train, cfg.hyperparams());
}

}  // namespace

std::vector<RmseRecord> run_rmse_vs_snr(const ExperimentConfig& cfg,
                                        const std::function<void(const RmseRecord&)>& on_record) {
    const ArrayGeometry geom = cfg.geometry();
    const SvrModel model = train_from_config(cfg, geom);
    const SteeringTable table = build_steering_table(geom, cfg.music_grid);

    std::vector<RmseRecord> records;
    records.reserve(cfg.snr_db_list.size());
    for (size_t s = 0; s < cfg.snr_db_list.size(); ++s) {
        records.push_back(
            run_point(cfg, geom, model, table, cfg.snr_db_list[s], cfg.snr_db_list[s], s));
        if (on_record) {
            on_record(records.back());
        }
    }
    return records;
}

std::vector<RmseRecord> run_rmse_vs_n(const ExperimentConfig& cfg,
                                      const std::function<void(const RmseRecord&)>& on_record) {
    std::vector<RmseRecord> records;
    records.reserve(cfg.n_elements_list.size());
    for (size_t s = 0; s < cfg.n_elements_list.size(); ++s) {
        const int n = cfg.n_elements_list[s];
        const ArrayGeometry geom = cfg.geometry_for(n);
        const SvrModel model = train_from_config(cfg, geom);
        const SteeringTable table = build_steering_table(geom, cfg.music_grid);
        // Offset the sweep index so SNR and N sweeps never share streams.
        records.push_back(run_point(cfg, geom, model, table, cfg.snr_db_for_n_sweep,
                                    static_cast<double>(n), 1000 + s));
        if (on_record) {
            on_record(records.back());
        }
    }
    return records;
}

namespace {

void write_csv(const std::vector<RmseRecord>& records, const std::string& axis_label,
               const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("emit_artifacts: cannot write " + path.string());
    }
    out << axis_label
        << ",rmse_phi_svr,rmse_theta_svr,rmse_phi_music,rmse_theta_music,"
           "n_trials,n_boresight,n_clamp\n";
    for (const RmseRecord& r : records) {
        out << format_double(r.axis) << ',' << format_double(r.rmse_phi_svr) << ','
            << format_double(r.rmse_theta_svr) << ',' << format_double(r.rmse_phi_music) << ','
            << format_double(r.rmse_theta_music) << ',' << r.n_trials << ',' << r.n_boresight
            << ',' << r.n_clamp << '\n';
    }
}

struct Series {
    std::string name;
    std::string color;
    std::vector<double> y;
};

// Minimal static line chart; one polyline per series.
void write_svg(const std::vector<double>& x, const std::vector<Series>& series,
               const std::string& x_label, const std::string& y_label,
               const std::filesystem::path& path) {
    const double w = 640.0;
    const double h = 480.0;
    const double ml = 60.0, mr = 20.0, mt = 20.0, mb = 45.0;

    double x_min = x.front(), x_max = x.back();
    if (x_max == x_min) {
        x_max = x_min + 1.0;
    }
    double y_max = 0.0;
    for (const Series& s : series) {
        for (double v : s.y) {
            y_max = std::max(y_max, v);
        }
    }
    if (y_max <= 0.0) {
        y_max = 1.0;
    }
    y_max *= 1.05;

    auto px = [&](double v) { return ml + (v - x_min) / (x_max - x_min) * (w - ml - mr); };
    auto py = [&](double v) { return h - mb - v / y_max * (h - mt - mb); };

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("emit_artifacts: cannot write " + path.string());
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10
        << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
    out << "<text x=\"15\" y=\"" << (mt + h - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 15 "
        << (mt + h - mb) / 2 << ")\">" << y_label << "</text>\n";
    for (size_t i = 0; i < x.size(); ++i) {
        out << "<text x=\"" << px(x[i]) << "\" y=\"" << h - mb + 16
            << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(x[i])
            << "</text>\n";
    }
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = y_max * tick / 4.0;
        out << "<text x=\"" << ml - 6 << "\" y=\"" << py(v) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(std::round(v * 100) / 100)
            << "</text>\n";
    }
    double ly = mt + 12;
    for (const Series& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < x.size(); ++i) {
            out << px(x[i]) << ',' << py(s.y[i]) << (i + 1 < x.size() ? " " : "");
        }
        out << "\"/>\n";
        out << "<text x=\"" << w - mr - 150 << "\" y=\"" << ly << "\" font-size=\"12\" fill=\""
            << s.color << "\">" << s.name << "</text>\n";
        ly += 16;
    }
    out << "</svg>\n";
}

void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("emit_artifacts: cannot write " + path.string());
    }
    out << "svrdoa run manifest\n";
    out << "git " << SVRDOA_GIT_DESCRIBE << "\n";
    out << "seed " << cfg.seed << "\n";
    out << "config:\n" << config_to_string(cfg);
}

}  // namespace

void emit_artifacts(const std::vector<RmseRecord>& records, const std::string& axis_label,
                    const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    if (!std::filesystem::is_directory(out_dir)) {
        throw std::runtime_error("emit_artifacts: not a directory: " + out_dir.string());
    }
    const std::string base = axis_label == "snr_db" ? "rmse_vs_snr" : "rmse_vs_n";
    write_csv(records, axis_label, out_dir / (base + ".csv"));
    write_manifest(cfg, out_dir / (base + "_manifest.txt"));
    if (records.empty()) {
        return;  // header-only CSV, no chart
    }

    std::vector<double> x;
    Series s1{"rmse_phi_svr", "#1f77b4", {}};
    Series s2{"rmse_theta_svr", "#ff7f0e", {}};
    Series s3{"rmse_phi_music", "#2ca02c", {}};
    Series s4{"rmse_theta_music", "#d62728", {}};
    for (const RmseRecord& r : records) {
        x.push_back(r.axis);
        s1.y.push_back(r.rmse_phi_svr);
        s2.y.push_back(r.rmse_theta_svr);
        s3.y.push_back(r.rmse_phi_music);
        s4.y.push_back(r.rmse_theta_music);
    }
    write_svg(x, {s1, s2, s3, s4}, axis_label, "RMSE (deg)", out_dir / (base + ".svg"));
}

void emit_complexity_artifacts(const ExperimentConfig& cfg,
                               const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir / "complexity.csv");
    if (!out) {
        throw std::runtime_error("emit_complexity_artifacts: cannot write complexity.csv");
    }
    out << "n_elements,music_mults,svr_mults,gain_db\n";
    std::vector<double> x;
    Series gain{"gain_db", "#1f77b4", {}};
    for (int n = cfg.complexity_n_min; n <= cfg.complexity_n_max; ++n) {
        CostParams p;
        p.n_elements = n;
        p.n_snapshots = cfg.n_snapshots;
        p.n_train = cfg.train_phi_count;
        p.n_theta = cfg.music_grid.n_theta;
        p.n_phi = cfg.music_grid.n_phi;
        p.log2_p = cfg.log2_p;
        const CostReport r = cost_report(p);
        out << n << ',' << r.music_mults << ',' << r.svr_cfa_mults << ','
            << format_double(r.gain_db) << '\n';
        x.push_back(n);
        gain.y.push_back(r.gain_db);
    }
    out.close();
    write_svg(x, {gain}, "n_elements", "gain (dB)", out_dir / "complexity_gain.svg");
    write_manifest(cfg, out_dir / "complexity_manifest.txt");
}

Eigen::MatrixXcd load_covariance_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_covariance_file: cannot open " + path.string());
    }
    int n = 0;
    if (!(in >> n) || n < 2) {
        throw std::runtime_error("load_covariance_file: bad matrix order");
    }
    Eigen::MatrixXcd r(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im)) {
                throw std::runtime_error("load_covariance_file: truncated matrix data");
            }
            r(i, j) = {re, im};
        }
    }
    return r;
}

void save_covariance_file(const Eigen::MatrixXcd& R, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_covariance_file: cannot open " + path.string());
    }
    out << R.rows() << "\n";
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
        for (Eigen::Index j = 0; j < R.cols(); ++j) {
            out << format_double(R(i, j).real()) << ' ' << format_double(R(i, j).imag())
                << (j + 1 < R.cols() ? " " : "");
        }
        out << "\n";
    }
}

}  // namespace svrdoa
