#include "qgstorm/ensemble.hpp"

#include <cmath>
#include <thread>

namespace qgstorm {

namespace {

// Welford accumulator; numerically stable for large ensembles.
struct Accumulator {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / double(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
    double ci_halfwidth() const {
        return n > 1 ? 1.959963984540054 * std::sqrt(variance() / double(n)) : 0.0;
    }
};

// Wilson-Hilferty approximation to the chi-square quantile.
double chi2_quantile(double z, double dof) {
    const double a = 2.0 / (9.0 * dof);
    const double c = 1.0 - a + z * std::sqrt(a);
    return dof * c * c * c;
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
    cfg.params.validate();
    cfg.noise.validate();
    if (cfg.n_traj < 1) throw std::domain_error("run_ensemble: n_traj must be >= 1");

    std::vector<TrajectoryRecord> records(size_t(cfg.n_traj));
    const int workers = std::max(1, std::min(cfg.workers, cfg.n_traj));

    auto work = [&](int w) {
        for (int i = w; i < cfg.n_traj; i += workers) {
            records[size_t(i)] = simulate(cfg.params, cfg.noise, cfg.omega0, cfg.T, cfg.h,
                                          cfg.scheme, cfg.sim, cfg.base_seed, uint64_t(i));
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(size_t(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    // Merge in trajectory order; the time base comes from the longest record.
    EnsembleResult out;
    size_t longest = 0;
    for (const auto& rec : records) longest = std::max(longest, rec.size());
    std::vector<Accumulator> acc_l2(longest), acc_sup(longest);
    std::vector<double> minmax_t(longest, 0.0);
    out.stats.n_blowup.assign(longest, 0);
    for (int i = 0; i < cfg.n_traj; ++i) {
        const auto& rec = records[size_t(i)];
        if (rec.aborted) {
            out.failed.push_back(i);
            ++out.stats.total_blowups;
        }
        for (size_t k = 0; k < longest; ++k) {
            if (k < rec.size()) {
                acc_l2[k].add(rec.l2[k]);
                acc_sup[k].add(rec.sup_est[k]);
                minmax_t[k] = rec.t[k];
            } else {
                ++out.stats.n_blowup[k];
            }
        }
    }
    out.stats.t = std::move(minmax_t);
    for (size_t k = 0; k < longest; ++k) {
        out.stats.mean_l2.push_back(acc_l2[k].mean);
        out.stats.var_l2.push_back(acc_l2[k].variance());
        out.stats.ci_l2.push_back(acc_l2[k].ci_halfwidth());
        out.stats.mean_sup.push_back(acc_sup[k].mean);
        out.stats.var_sup.push_back(acc_sup[k].variance());
        out.stats.ci_sup.push_back(acc_sup[k].ci_halfwidth());
    }
    if (cfg.keep_records) out.records = std::move(records);
    return out;
}

OuVarianceReport ou_variance_test(const NoiseSpec& spec, const ModelParams& p, double t, int n,
                                  uint64_t base_seed) {
    spec.validate();
    p.validate();
    if (n < 1000) throw std::domain_error("ou_variance_test: need at least 1e3 draws");
    if (t < 0.0) throw std::domain_error("ou_variance_test: t must be nonnegative");

    const int mx = p.modes_x, my = p.modes_y;
    const Eigen::MatrixXd mu = spec.mu_matrix(mx, my);
    std::vector<Accumulator> acc(size_t(mx) * size_t(my));
    if (t > 0.0) {
        for (int draw = 0; draw < n; ++draw) {
            // one exact OU step of length t samples W_A(t) from the true law
            ConvolutionState st = ConvolutionState::initial(mx, my, base_seed, uint64_t(draw));
            st = ou_update(st, t, spec, p.nu);
            for (int i = 0; i < mx; ++i)
                for (int j = 0; j < my; ++j)
                    acc[size_t(i) * size_t(my) + size_t(j)].add(st.coeffs.coeffs(i, j));
        }
    }

    OuVarianceReport rep;
    const double z99 = 2.5758293035489004;  // two-sided 99%
    long passed = 0, tested = 0;
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j) {
            if (mu(i, j) <= 0.0) continue;
            OuVarianceEntry e;
            e.mode = Mode{i + 1, j + 1};
            const double lambda = eigenvalue(e.mode, p.nu);
            e.expected_var =
                t > 0.0 ? mu(i, j) * (-std::expm1(2.0 * lambda * t)) / (2.0 * std::abs(lambda))
                        : 0.0;
            e.sample_var = t > 0.0 ? acc[size_t(i) * size_t(my) + size_t(j)].variance() : 0.0;
            const double dof = double(n - 1);
            e.lo = e.expected_var * chi2_quantile(-z99, dof) / dof;
            e.hi = e.expected_var * chi2_quantile(z99, dof) / dof;
            e.pass = t > 0.0 ? (e.sample_var >= e.lo && e.sample_var <= e.hi)
                             : (e.sample_var == 0.0);
            rep.entries.push_back(e);
            ++tested;
            if (e.pass) ++passed;
        }
    rep.pass_fraction = tested > 0 ? double(passed) / double(tested) : 1.0;
    return rep;
}

}  // namespace qgstorm
