#include "svrdoa/music_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace svrdoa {

namespace {

double offdiag_norm_sq(const Eigen::MatrixXcd& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return s;
}

}  // namespace

EigenDecomposition hermitian_evd(const Eigen::MatrixXcd& R, double tol) {
    const int n = static_cast<int>(R.rows());
    if (R.cols() != n || n < 1) {
        throw std::invalid_argument("hermitian_evd: square matrix required");
    }
    if ((R - R.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, R.norm())) {
        throw std::invalid_argument("hermitian_evd: matrix is not Hermitian");
    }

    Eigen::MatrixXcd a = ((R + R.adjoint()) * 0.5).eval();
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
    const double scale = a.norm();
    const double stop_sq = (scale > 0.0) ? (tol * scale) * (tol * scale) : 0.0;

    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_norm_sq(a) <= stop_sq) {
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double m = std::abs(a(p, q));
                if (m == 0.0) {
                    continue;
                }
                const std::complex<double> phase = a(p, q) / m;
                const double tau = (std::real(a(q, q)) - std::real(a(p, p))) / (2.0 * m);
                // Smaller root of t^2 - 2*tau*t - 1 = 0 for a bounded angle.
                const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const std::complex<double> sp = s * phase;        // s * e^{i phi}
                const std::complex<double> spc = std::conj(sp);   // s * e^{-i phi}

                // A <- U^H A U with U touching columns p and q only.
                const Eigen::VectorXcd colp = a.col(p);
                const Eigen::VectorXcd colq = a.col(q);
                a.col(p) = c * colp + spc * colq;
                a.col(q) = -sp * colp + c * colq;
                const Eigen::RowVectorXcd rowp = a.row(p);
                const Eigen::RowVectorXcd rowq = a.row(q);
                a.row(p) = c * rowp + sp * rowq;
                a.row(q) = -spc * rowp + c * rowq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = std::real(a(p, p));
                a(q, q) = std::real(a(q, q));

                const Eigen::VectorXcd vp = v.col(p);
                const Eigen::VectorXcd vq = v.col(q);
                v.col(p) = c * vp + spc * vq;
                v.col(q) = -sp * vp + c * vq;
            }
        }
    }
    if (sweep == kMaxSweeps && offdiag_norm_sq(a) > stop_sq) {
        throw EvdNonConvergence("hermitian_evd: Jacobi sweeps exhausted");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        return std::real(a(lhs, lhs)) > std::real(a(rhs, rhs));
    });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.eigenvalues(i) = std::real(a(order[i], order[i]));
        out.eigenvectors.col(i) = v.col(order[i]);
    }
    return out;
}

SteeringTable build_steering_table(const ArrayGeometry& geom, const GridSpec& grid) {
    if (grid.n_theta < 1 || grid.n_phi < 1) {
        throw std::invalid_argument("build_steering_table: empty grid");
    }
    SteeringTable table;
    table.grid = grid;
    table.vectors.resize(geom.n_elements, static_cast<Eigen::Index>(grid.n_theta) * grid.n_phi);
    Eigen::Index col = 0;
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            table.vectors.col(col++) = steering_vector(geom, grid.theta_at(i), grid.phi_at(j));
        }
    }
    return table;
}

Eigen::MatrixXd music_spectrum(const Eigen::MatrixXcd& noise_projector,
                               const SteeringTable& table) {
    const GridSpec& grid = table.grid;
    // denom(g) = a_g^H P a_g for every grid column at once.
    const Eigen::MatrixXcd pa = noise_projector * table.vectors;
    const Eigen::VectorXd denom =
        (table.vectors.conjugate().cwiseProduct(pa)).colwise().sum().real().transpose();

    Eigen::MatrixXd values(grid.n_theta, grid.n_phi);
    Eigen::Index col = 0;
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            values(i, j) = 1.0 / std::max(denom(col++), std::numeric_limits<double>::min());
        }
    }
    return values;
}

MusicEstimate music_estimate(const Eigen::MatrixXcd& R, const ArrayGeometry& geom,
                             const GridSpec& grid, int n_sources, double gap_tol,
                             const SteeringTable* table) {
    const int n = geom.n_elements;
    if (n_sources < 1 || n_sources >= n) {
        throw std::invalid_argument("music_estimate: need 1 <= n_sources < N");
    }

    const EigenDecomposition evd = hermitian_evd(R);
    const Eigen::MatrixXcd noise = evd.eigenvectors.rightCols(n - n_sources);
    const Eigen::MatrixXcd projector = noise * noise.adjoint();

    MusicEstimate out;
    out.eigen_gap = evd.eigenvalues(n_sources - 1) - evd.eigenvalues(n_sources);
    out.degenerate_subspace =
        out.eigen_gap < gap_tol * std::max(1.0, std::abs(evd.eigenvalues(0)));

    SteeringTable local;
    if (!table) {
        local = build_steering_table(geom, grid);
        table = &local;
    }
    const Eigen::MatrixXd spectrum = music_spectrum(projector, *table);
    std::tie(out.theta_deg, out.phi_deg) = grid_argmax(spectrum, grid);
    return out;
}

std::pair<double, double> grid_argmax(const Eigen::MatrixXd& values, const GridSpec& grid) {
    if (values.rows() != grid.n_theta || values.cols() != grid.n_phi) {
        throw std::invalid_argument("grid_argmax: spectrum does not match the grid");
    }
    int best_i = 0;
    int best_j = 0;
    double best = values(0, 0);
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            if (values(i, j) > best) {
                best = values(i, j);
                best_i = i;
                best_j = j;
            }
        }
    }
    return {grid.theta_at(best_i), grid.phi_at(best_j)};
}

}  // namespace svrdoa
