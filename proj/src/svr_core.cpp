#include "svrdoa/svr_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace svrdoa {

namespace {

void validate_hyperparams(const SvrHyperparams& hp, const TrainingSet& train) {
    if (!(hp.c_bound > 0.0) || !std::isfinite(hp.c_bound)) {
        throw std::invalid_argument("SvrHyperparams: C must be positive and finite");
    }
    if (hp.epsilon_deg < 0.0 || !std::isfinite(hp.epsilon_deg)) {
        throw std::invalid_argument("SvrHyperparams: epsilon must be >= 0 and finite");
    }
    if (!(hp.kernel_width > 0.0) || !std::isfinite(hp.kernel_width)) {
        throw std::invalid_argument("SvrHyperparams: kernel width must be positive");
    }
    if (!(hp.qp_tolerance > 0.0) || hp.max_iterations < 1) {
        throw std::invalid_argument("SvrHyperparams: bad solver limits");
    }
    const auto [lo, hi] = std::minmax_element(train.targets_deg.begin(), train.targets_deg.end());
    if (*hi > *lo && hp.epsilon_deg >= *hi - *lo) {
        throw std::invalid_argument("SvrHyperparams: epsilon spans the whole target range");
    }
}

void validate_training_set(const TrainingSet& train) {
    if (train.size() < 2 || train.features.size() != train.targets_deg.size()) {
        throw std::invalid_argument("TrainingSet: need at least 2 consistent pairs");
    }
    const int dim = train.features.front().size();
    for (const auto& f : train.features) {
        if (f.size() != dim) {
            throw std::invalid_argument("TrainingSet: inconsistent feature lengths");
        }
    }
}

Eigen::MatrixXd gram_matrix(const TrainingSet& train, double delta) {
    const int l = train.size();
    Eigen::MatrixXd k(l, l);
    for (int i = 0; i < l; ++i) {
        k(i, i) = 1.0;
        for (int j = i + 1; j < l; ++j) {
            k(i, j) = k(j, i) = rbf_kernel(train.features[i], train.features[j], delta);
        }
    }
    return k;
}

double dual_objective(const Eigen::MatrixXd& k, const TrainingSet& train,
                      const SvrHyperparams& hp, const std::vector<double>& up,
                      const std::vector<double>& down) {
    const int l = train.size();
    Eigen::VectorXd beta(l);
    for (int i = 0; i < l; ++i) {
        beta(i) = up[i] - down[i];
    }
    double j = 0.0;
    for (int i = 0; i < l; ++i) {
        j += train.targets_deg[i] * beta(i) - hp.epsilon_deg * (up[i] + down[i]);
    }
    j -= 0.5 * beta.dot(k * beta);
    return j;
}

}  // namespace

double default_epsilon_deg(double nominal_snr_db) {
    const double sigma = std::sqrt(noise_power_from_snr_db(nominal_snr_db));
    return std::max(1.0043 * sigma, 1e-3);
}

double default_c_bound(std::span<const double> targets_deg) {
    const size_t l = targets_deg.size();
    if (l < 2) {
        throw std::invalid_argument("default_c_bound: need at least 2 targets");
    }
    const double mu =
        std::accumulate(targets_deg.begin(), targets_deg.end(), 0.0) / static_cast<double>(l);
    double ssq = 0.0;
    for (double t : targets_deg) {
        ssq += (t - mu) * (t - mu);
    }
    const double sigma = std::sqrt(ssq / static_cast<double>(l - 1));
    return std::max(std::abs(mu + 3.0 * sigma), std::abs(mu - 3.0 * sigma));
}

double rbf_kernel(const FeatureVector& z1, const FeatureVector& z2, double delta) {
    if (z1.size() != z2.size()) {
        throw std::invalid_argument("rbf_kernel: feature lengths differ");
    }
    return std::exp(-delta * (z1.z - z2.z).squaredNorm());
}

TrainingSet build_training_set(const ArrayGeometry& geom, double phi_start_deg,
                               double phi_step_deg, int phi_count, double theta_train_deg) {
    if (phi_count < 2) {
        throw std::invalid_argument("build_training_set: need at least 2 grid points");
    }
    if (!(theta_train_deg > 0.0) || theta_train_deg > 90.0) {
        throw std::invalid_argument("build_training_set: training elevation must be in (0, 90]");
    }
    TrainingSet train;
    train.features.reserve(phi_count);
    train.targets_deg.reserve(phi_count);
    for (int i = 0; i < phi_count; ++i) {
        const double phi = phi_start_deg + i * phi_step_deg;
        const PhaseVector g = noiseless_phase(geom, theta_train_deg, phi);
        FeatureExtraction fx = normalize_features(g, 1e-6);
        if (fx.boresight()) {
            throw std::invalid_argument("build_training_set: grid point hits boresight");
        }
        train.features.push_back(std::move(*fx.feature));
        train.targets_deg.push_back(phi);
    }
    return train;
}

// Pairwise coordinate ascent on the 2L multipliers (alpha', alpha), labels
// y = +1 for the alpha' half and -1 for the alpha half. Each step picks the
// most violating feasible pair and maximizes the dual exactly along the
// direction that keeps sum(beta) = 0.
DualSolution solve_dual(const TrainingSet& train, const SvrHyperparams& hp) {
    validate_training_set(train);
    validate_hyperparams(hp, train);

    const int l = train.size();
    const int two_l = 2 * l;
    const double c = hp.c_bound;
    const Eigen::MatrixXd k = gram_matrix(train, hp.kernel_width);

    std::vector<double> a(two_l, 0.0);   // [alpha' | alpha]
    Eigen::VectorXd h = Eigen::VectorXd::Zero(l);  // K beta

    auto label = [l](int t) { return t < l ? 1.0 : -1.0; };
    auto index = [l](int t) { return t < l ? t : t - l; };
    // v_t = y_t * dJ/da_t; at the optimum all of I_up sits below all of I_low.
    auto v_of = [&](int t) {
        return train.targets_deg[index(t)] - hp.epsilon_deg * label(t) - h(index(t));
    };

    DualSolution sol;
    sol.alpha_up.assign(l, 0.0);
    sol.alpha_down.assign(l, 0.0);
    sol.coefficients.assign(l, 0.0);

    // Most violating pair: the I_up maximizer of v against the I_low minimizer.
    struct Pair {
        int i = -1;
        int j = -1;
        double violation = 0.0;
    };
    auto select_pair = [&]() {
        Pair p;
        double v_max = -std::numeric_limits<double>::infinity();
        double v_min = std::numeric_limits<double>::infinity();
        for (int t = 0; t < two_l; ++t) {
            const bool plus = t < l;
            const double at = a[t];
            const double v = v_of(t);
            if ((plus ? at < c : at > 0.0) && v > v_max) {
                v_max = v;
                p.i = t;
            }
            if ((plus ? at > 0.0 : at < c) && v < v_min) {
                v_min = v;
                p.j = t;
            }
        }
        p.violation = (p.i >= 0 && p.j >= 0) ? v_max - v_min : 0.0;
        return p;
    };

    const double snap = 1e-12 * std::max(1.0, c);
    long iter = 0;
    double violation = 0.0;
    for (; iter < hp.max_iterations; ++iter) {
        const Pair pair = select_pair();
        const int i = pair.i;
        const int j = pair.j;
        violation = pair.violation;
        if (i < 0 || j < 0 || violation <= hp.qp_tolerance) {
            break;
        }

        const int mi = index(i);
        const int mj = index(j);
        // Moving a_i up and a_j down by delta along the constraint manifold:
        // J(delta) = delta * violation - 0.5 * delta^2 * eta.
        double eta = 0.0;
        if (mi != mj) {
            eta = k(mi, mi) + k(mj, mj) - 2.0 * k(mi, mj);
        }
        eta = std::max(eta, 1e-12);

        const double cap_i = (i < l) ? c - a[i] : a[i];
        const double cap_j = (j < l) ? a[j] : c - a[j];
        double delta = std::min(violation / eta, std::min(cap_i, cap_j));

        a[i] += label(i) * delta;
        a[j] -= label(j) * delta;
        for (int t : {i, j}) {
            if (a[t] < snap) {
                a[t] = 0.0;
            } else if (a[t] > c - snap) {
                a[t] = c;
            }
        }
        if (mi != mj) {
            h += delta * (k.col(mi) - k.col(mj));
        }

        if (iter % l == 0) {
            // Trace point: record J and assert the invariants that every
            // update is supposed to preserve.
            double sum_beta = 0.0;
            for (int t = 0; t < two_l; ++t) {
                if (a[t] < 0.0 || a[t] > c) {
                    throw std::logic_error("solve_dual: box constraint left mid-run");
                }
                sum_beta += label(t) * a[t];
            }
            if (std::abs(sum_beta) > 1e-9 * l * std::max(1.0, c)) {
                throw std::logic_error("solve_dual: equality constraint drifted mid-run");
            }
            sol.objective_trace.push_back(dual_objective(
                k, train, hp, {a.begin(), a.begin() + l}, {a.begin() + l, a.end()}));
        }
    }

    if (iter == hp.max_iterations) {
        violation = select_pair().violation;  // report the state actually reached
    }
    sol.converged = violation <= hp.qp_tolerance;
    sol.iterations = iter;
    sol.kkt_violation = violation;
    for (int m = 0; m < l; ++m) {
        sol.alpha_up[m] = a[m];
        sol.alpha_down[m] = a[l + m];
        sol.coefficients[m] = a[m] - a[l + m];
    }
    sol.objective = dual_objective(k, train, hp, sol.alpha_up, sol.alpha_down);
    sol.objective_trace.push_back(sol.objective);
    return sol;
}

BiasEstimate estimate_bias(const DualSolution& sol, const TrainingSet& train,
                           const SvrHyperparams& hp) {
    const int l = train.size();
    const Eigen::MatrixXd k = gram_matrix(train, hp.kernel_width);
    Eigen::VectorXd beta(l);
    for (int i = 0; i < l; ++i) {
        beta(i) = sol.coefficients[i];
    }
    const Eigen::VectorXd h = k * beta;  // predictions without bias

    double mean_residual = 0.0;
    for (int i = 0; i < l; ++i) {
        mean_residual += train.targets_deg[i] - h(i);
    }
    mean_residual /= l;

    BiasEstimate out;
    out.bias_deg = hp.bias_convention == BiasConvention::kResidualCentering
                       ? mean_residual
                       : -mean_residual;

    // Admissibility window, both bounds with the -epsilon offset as printed.
    out.eta1 = -std::numeric_limits<double>::infinity();
    out.eta2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < l; ++i) {
        const double candidate = -hp.epsilon_deg + train.targets_deg[i] - h(i);
        if (sol.alpha_up[i] < hp.c_bound || sol.alpha_down[i] > 0.0) {
            out.eta1 = std::max(out.eta1, candidate);
        }
        if (sol.alpha_up[i] > 0.0 || sol.alpha_down[i] < hp.c_bound) {
            out.eta2 = std::min(out.eta2, candidate);
        }
    }
    out.kkt_window_violation = !(out.eta1 <= out.bias_deg && out.bias_deg <= out.eta2);
    return out;
}

SvrModel train_svr(const ArrayGeometry& geom, const TrainingSet& train,
                   const SvrHyperparams& hp, DualSolution* diagnostics,
                   BiasEstimate* bias_diag) {
    DualSolution sol = solve_dual(train, hp);
    BiasEstimate bias = estimate_bias(sol, train, hp);

    SvrModel model;
    model.n_elements = geom.n_elements;
    model.coefficients = sol.coefficients;
    model.alpha_up = sol.alpha_up;
    model.alpha_down = sol.alpha_down;
    model.bias_deg = bias.bias_deg;
    model.training_features = train.features;
    model.hyperparams = hp;

    if (diagnostics) {
        *diagnostics = std::move(sol);
    }
    if (bias_diag) {
        *bias_diag = bias;
    }
    return model;
}

AzimuthPrediction predict_azimuth(const SvrModel& model, const FeatureVector& z) {
    double f = model.bias_deg;
    for (size_t i = 0; i < model.training_features.size(); ++i) {
        if (model.coefficients[i] != 0.0) {
            f += model.coefficients[i] *
                 rbf_kernel(model.training_features[i], z, model.hyperparams.kernel_width);
        }
    }
    AzimuthPrediction out;
    out.phi_deg = std::clamp(f, 0.0, 181.0);
    out.clamped = out.phi_deg != f;
    return out;
}

double duality_gap(const SvrModel& model, const TrainingSet& train, double dual_objective) {
    const int l = train.size();
    const double eps = model.hyperparams.epsilon_deg;
    Eigen::VectorXd beta(l);
    for (int i = 0; i < l; ++i) {
        beta(i) = model.coefficients[i];
    }
    const Eigen::MatrixXd k = gram_matrix(train, model.hyperparams.kernel_width);
    const Eigen::VectorXd h = k * beta;

    double primal = 0.5 * beta.dot(h);  // ||w||^2 in feature space
    for (int i = 0; i < l; ++i) {
        const double miss = std::abs(train.targets_deg[i] - (h(i) + model.bias_deg)) - eps;
        primal += model.hyperparams.c_bound * std::max(0.0, miss);
    }
    return primal - dual_objective;
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, p);
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || p != end) {
        throw std::runtime_error("model file: bad number for " + what + ": '" + s + "'");
    }
    return v;
}

}  // namespace

void save_model(const SvrModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_model: cannot open " + path.string());
    }
    const int l = static_cast<int>(model.coefficients.size());
    const int dim = model.training_features.empty() ? 0 : model.training_features.front().size();
    out << "svrdoa-model 1\n";
    out << "n_elements " << model.n_elements << "\n";
    out << "feature_length " << dim << "\n";
    out << "n_train " << l << "\n";
    out << "kernel_width " << fmt17(model.hyperparams.kernel_width) << "\n";
    out << "c_bound " << fmt17(model.hyperparams.c_bound) << "\n";
    out << "epsilon_deg " << fmt17(model.hyperparams.epsilon_deg) << "\n";
    out << "bias_deg " << fmt17(model.bias_deg) << "\n";
    out << "rows\n";
    for (int i = 0; i < l; ++i) {
        out << fmt17(model.coefficients[i]);
        for (int d = 0; d < dim; ++d) {
            out << ' ' << fmt17(model.training_features[i].z(d));
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("save_model: write failed for " + path.string());
    }
}

SvrModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_model: cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != "svrdoa-model 1") {
        throw std::runtime_error("load_model: unrecognized header in " + path.string());
    }

    SvrModel model;
    int l = -1;
    int dim = -1;
    while (std::getline(in, line)) {
        if (line == "rows") {
            break;
        }
        std::istringstream ls(line);
        std::string key, value;
        if (!(ls >> key >> value)) {
            throw std::runtime_error("load_model: malformed header line '" + line + "'");
        }
        if (key == "n_elements") {
            model.n_elements = static_cast<int>(parse_double(value, key));
        } else if (key == "feature_length") {
            dim = static_cast<int>(parse_double(value, key));
        } else if (key == "n_train") {
            l = static_cast<int>(parse_double(value, key));
        } else if (key == "kernel_width") {
            model.hyperparams.kernel_width = parse_double(value, key);
        } else if (key == "c_bound") {
            model.hyperparams.c_bound = parse_double(value, key);
        } else if (key == "epsilon_deg") {
            model.hyperparams.epsilon_deg = parse_double(value, key);
        } else if (key == "bias_deg") {
            model.bias_deg = parse_double(value, key);
        } else {
            throw std::runtime_error("load_model: unknown header key '" + key + "'");
        }
    }
    if (l < 1 || dim < 1) {
        throw std::runtime_error("load_model: missing n_train / feature_length");
    }

    model.coefficients.reserve(l);
    model.training_features.reserve(l);
    for (int i = 0; i < l; ++i) {
        if (!std::getline(in, line)) {
            throw std::runtime_error("load_model: truncated row section");
        }
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) {
            throw std::runtime_error("load_model: empty row");
        }
        model.coefficients.push_back(parse_double(tok, "coefficient"));
        FeatureVector f;
        f.z.resize(dim);
        for (int d = 0; d < dim; ++d) {
            if (!(ls >> tok)) {
                throw std::runtime_error("load_model: short feature row");
            }
            f.z(d) = parse_double(tok, "feature");
        }
        model.training_features.push_back(std::move(f));
    }

    // Complementary split is implied by the coefficients.
    model.alpha_up.resize(l);
    model.alpha_down.resize(l);
    for (int i = 0; i < l; ++i) {
        model.alpha_up[i] = std::max(model.coefficients[i], 0.0);
        model.alpha_down[i] = std::max(-model.coefficients[i], 0.0);
    }
    return model;
}

}  // namespace svrdoa
