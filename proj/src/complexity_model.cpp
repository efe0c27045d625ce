#include "svrdoa/complexity_model.hpp"

#include <cmath>
#include <stdexcept>

namespace svrdoa {

std::int64_t music_cost(int n, int m, int n_theta, int n_phi) {
    if (n < 2 || m < 1 || n_theta < 1 || n_phi < 1) {
        throw std::invalid_argument("music_cost: parameters must be positive, N >= 2");
    }
    const std::int64_t nn = n;
    const std::int64_t grid = static_cast<std::int64_t>(n_theta) * n_phi;
    return 48 * nn * nn * nn + 4 * nn * nn * m + 2 * nn * nn +
           grid * (4 * nn * nn - 4 * nn + 3);
}

std::int64_t svr_cfa_cost(int n, int m, int l, int log2_p) {
    if (n < 2 || m < 1 || l < 1 || log2_p < 0) {
        throw std::invalid_argument("svr_cfa_cost: bad parameters");
    }
    const std::int64_t nn = n;
    const std::int64_t ll = l;
    return 2 * nn * m * (nn - 1) + 3 * nn * (nn - 1) + ll * ll + 2 +
           static_cast<std::int64_t>(log2_p) * (3 * nn * (nn - 1) / 2 + 1);
}

double gain_db(int n, int m, int l, int n_theta, int n_phi, int log2_p) {
    const double music = static_cast<double>(music_cost(n, m, n_theta, n_phi));
    const double svr = static_cast<double>(svr_cfa_cost(n, m, l, log2_p));
    return 10.0 * std::log10(music / svr);
}

CostReport cost_report(const CostParams& p) {
    CostReport r;
    r.params = p;
    r.music_mults = music_cost(p.n_elements, p.n_snapshots, p.n_theta, p.n_phi);
    r.svr_cfa_mults = svr_cfa_cost(p.n_elements, p.n_snapshots, p.n_train, p.log2_p);
    r.gain_db = 10.0 * std::log10(static_cast<double>(r.music_mults) /
                                  static_cast<double>(r.svr_cfa_mults));
    return r;
}

}  // namespace svrdoa
