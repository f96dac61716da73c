#pragma once

#include "qgstorm/dynamics.hpp"

namespace qgstorm {

struct EnsembleConfig {
    int n_traj = 100;
    uint64_t base_seed = 1;
    ModelParams params;
    NoiseSpec noise;
    SpectralField omega0;  // shared initial data
    double T = 1.0;
    double h = 1e-3;
    Scheme scheme = Scheme::mild_em;
    int workers = 1;  // never affects results, only scheduling
    SimOptions sim;
    bool keep_records = false;
};

// Per-record-time statistics of the l2 norm and the sup estimate across
// trajectories, merged in trajectory order after all workers join.
struct EnsembleStats {
    std::vector<double> t;
    std::vector<double> mean_l2, var_l2, ci_l2;    // 95% half-widths
    std::vector<double> mean_sup, var_sup, ci_sup;
    std::vector<long> n_blowup;  // trajectories aborted at or before t
    long total_blowups = 0;
};

struct EnsembleResult {
    EnsembleStats stats;
    std::vector<TrajectoryRecord> records;  // kept when cfg.keep_records
    std::vector<int> failed;                // indices of aborted trajectories
};

// n_traj independent trajectories with per-trajectory seeds derived from
// (base_seed, index); workers partition the index range statically, and
// per-trajectory failures are reported without aborting the batch.
EnsembleResult run_ensemble(const EnsembleConfig& cfg);

// Sample-variance test for the stochastic convolution: for each retained mode
// with mu > 0, the variance of W_A(t) over n draws is compared against
// mu (1 - e^{2 lambda t}) / (2 |lambda|) with a 99% chi-square band
// (Wilson-Hilferty quantiles).
struct OuVarianceEntry {
    Mode mode;
    double sample_var = 0.0;
    double expected_var = 0.0;
    double lo = 0.0, hi = 0.0;
    bool pass = false;
};

struct OuVarianceReport {
    std::vector<OuVarianceEntry> entries;
    double pass_fraction = 1.0;
};

OuVarianceReport ou_variance_test(const NoiseSpec& spec, const ModelParams& p, double t, int n,
                                  uint64_t base_seed);

}  // namespace qgstorm
