#pragma once

#include <cstdint>

namespace svrdoa {

// Real-multiplication accounting of both estimators. These are cost models,
// deliberately independent of how the algorithms in this repo are implemented.

struct CostParams {
    int n_elements = 3;
    int n_snapshots = 30;
    int n_train = 181;
    int n_theta = 90;
    int n_phi = 181;
    int log2_p = 10;  // arithmetic precision digits; 10 reproduces the published gains
};

struct CostReport {
    std::int64_t music_mults = 0;
    std::int64_t svr_cfa_mults = 0;
    double gain_db = 0.0;
    CostParams params;
};

/// 48 N^3 + 4 N^2 M + 2 N^2 + Ntheta Nphi (4 N^2 - 4 N + 3)
std::int64_t music_cost(int n, int m, int n_theta, int n_phi);

/// 2 N M (N-1) + 3 N (N-1) + L^2 + 2 + log2(p) (3 N (N-1)/2 + 1)
std::int64_t svr_cfa_cost(int n, int m, int l, int log2_p);

/// 10 log10(music / svr_cfa)
double gain_db(int n, int m, int l, int n_theta, int n_phi, int log2_p);

CostReport cost_report(const CostParams& p);

}  // namespace svrdoa
