#include "qgstorm/battery.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qgstorm/ensemble.hpp"
#include "qgstorm/io.hpp"
#include "qgstorm/verification.hpp"

namespace qgstorm {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

SpectralField random_field(int mx, int my, double l2_target, uint64_t seed, uint32_t salt) {
    SpectralField f = SpectralField::zero(mx, my);
    const uint64_t stream = rng::stream_key(seed, 0xF1E1Dull + salt);
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j) {
            // decaying spectrum keeps the field smooth enough for products
            const double decay = 1.0 / (1.0 + 0.1 * (double(i + 1) * (i + 1) + double(j + 1) * (j + 1)));
            f.coeffs(i, j) =
                decay * rng::normal(stream, uint32_t(i + 1), uint32_t(j + 1), salt,
                                    rng::Tag::generic);
        }
    f.coeffs *= l2_target / f.coeffs.norm();
    return f;
}

// Area of the intersection of the unit square with the disk B((cx,cy), rho),
// by composite Simpson over x of the clipped chord length. Used as the
// independent reference for the Monte Carlo kappa estimate.
double disk_square_area(double cx, double cy, double rho, int panels = 20000) {
    const double x0 = std::max(0.0, cx - rho), x1 = std::min(1.0, cx + rho);
    if (x1 <= x0) return 0.0;
    auto chord = [&](double x) {
        const double dx = x - cx;
        const double s2 = rho * rho - dx * dx;
        if (s2 <= 0.0) return 0.0;
        const double s = std::sqrt(s2);
        return std::max(0.0, std::min(1.0, cy + s) - std::max(0.0, cy - s));
    };
    const int n = panels + (panels % 2);  // even
    const double h = (x1 - x0) / n;
    double sum = chord(x0) + chord(x1);
    for (int i = 1; i < n; ++i) sum += chord(x0 + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double kappa_reference(int rho_grid) {
    const auto rhos = kappa_rho_grid(rho_grid);
    const auto centers = kappa_center_grid();
    double best = std::numeric_limits<double>::infinity();
    for (double rho : rhos)
        for (const auto& [cx, cy] : centers)
            best = std::min(best, disk_square_area(cx, cy, rho) / (rho * rho));
    return best;
}

struct Timer {
    Clock::time_point t0 = Clock::now();
    CheckResult done(CheckResult c) const {
        c.seconds = seconds_since(t0);
        return c;
    }
};

CheckResult check_spectral_exactness() {
    Timer timer;
    CheckResult c;
    c.name = "spectral_exactness";
    const double ev = eigenvalue(Mode{1, 1}, 1.0);
    const double dev_ev = std::abs(ev + 2.0 * kPi * kPi);
    const auto pc = poincare_check(32, 32);
    const double dev_rq = std::abs(pc.rayleigh_min - 2.0 * kPi * kPi);
    c.value = std::max(dev_ev, dev_rq);
    c.tolerance = 1e-9;
    c.pass = dev_ev <= 1e-12 && dev_rq <= 1e-9 && pc.elliptic_ok;
    c.detail = "eigenvalue dev " + io::format_double(dev_ev) + ", rayleigh dev " +
               io::format_double(dev_rq);
    return timer.done(c);
}

CheckResult check_jacobian_orthogonality(const RunConfig& cfg, int pairs) {
    Timer timer;
    CheckResult c;
    c.name = "jacobian_orthogonality";
    const int mx = 32, my = 32;
    const GridSpec grid = GridSpec::dealiased(mx, my, 1.5);
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        const SpectralField psi = random_field(mx, my, 1.0, cfg.seed, uint32_t(2 * k));
        const SpectralField omg = random_field(mx, my, 1.0, cfg.seed, uint32_t(2 * k + 1));
        const SpectralField j = jacobian(psi, omg, grid);
        const double scale_psi = norms(laplacian(psi)).l2;
        const double l2o = norms(omg).l2;
        const double rel_o = std::abs(dot(j, omg)) / (scale_psi * l2o * l2o);
        const double rel_p = std::abs(dot(j, psi)) / (scale_psi * l2o * norms(psi).l2);
        worst = std::max(worst, std::max(rel_o, rel_p));
    }
    c.value = worst;
    c.tolerance = 1e-9;
    c.pass = worst <= c.tolerance;
    c.detail = std::to_string(pairs) + " random dealiased pairs at 32x32";
    return timer.done(c);
}

CheckResult check_linear_oracle(const RunConfig& cfg) {
    Timer timer;
    CheckResult c;
    c.name = "linear_oracle";
    ModelParams p = cfg.model();
    p.beta = 0.0;
    p.modes_x = p.modes_y = 4;
    NoiseSpec silent;
    silent.mu_rule = MuRule::band;
    silent.mu_band = 0;
    double worst = 0.0;
    for (double h : {1e-2, 1e-3}) {
        SimOptions opts;
        opts.record_stride = 10;
        const auto rec = simulate(p, silent, SpectralField::single(Mode{1, 1}, 4, 4), 1.0, h,
                                  Scheme::mild_em, opts, cfg.seed, 0);
        for (size_t k = 0; k < rec.size(); ++k) {
            const double expect = norms(exact_linear_solution(Mode{1, 1}, p, rec.t[k])).l2;
            worst = std::max(worst, std::abs(rec.l2[k] - expect));
        }
    }
    c.value = worst;
    c.tolerance = 1e-10;
    c.pass = worst <= c.tolerance;
    c.detail = "single mode, beta=0, h in {1e-2, 1e-3}, T=1";
    return timer.done(c);
}

CheckResult check_energy_decay(const RunConfig& cfg) {
    Timer timer;
    CheckResult c;
    c.name = "energy_decay";
    ModelParams p = cfg.model();
    p.beta = 0.0;
    NoiseSpec silent;
    silent.mu_rule = MuRule::band;
    silent.mu_band = 0;
    const SpectralField omega0 = random_field(p.modes_x, p.modes_y, 1.0, cfg.seed, 77);
    SimOptions opts;
    opts.record_stride = 10;
    const auto rec = simulate(p, silent, omega0, 1.0, 1e-3, Scheme::mild_em, opts, cfg.seed, 0);
    const double rate = 2.0 * kPi * kPi * p.nu + p.r;
    double worst = 0.0;
    for (size_t k = 0; k < rec.size(); ++k)
        worst = std::max(worst, rec.l2[k] / (rec.l2[0] * std::exp(-rate * rec.t[k])));
    c.value = worst;
    c.tolerance = 1.01;
    c.pass = !rec.aborted && worst <= c.tolerance;
    c.detail = "||w(t)|| / (||w0|| e^{-(2 pi^2 nu + r) t}), generic data, 32x32";
    return timer.done(c);
}

CheckResult check_energy_identity(const RunConfig& cfg) {
    Timer timer;
    CheckResult c;
    c.name = "energy_identity_order";
    ModelParams p = cfg.model();
    p.nu = 0.4;
    p.r = 0.2;
    p.beta = 1.0;
    p.modes_x = p.modes_y = 16;
    NoiseSpec silent;
    silent.mu_rule = MuRule::band;
    silent.mu_band = 0;
    const SpectralField omega0 = random_field(16, 16, 0.3, cfg.seed, 42);
    SimOptions opts;
    opts.record_stride = 1;
    opts.keep_fields = true;
    const auto rec = simulate(p, silent, omega0, 0.08, 2e-3, Scheme::split, opts, cfg.seed, 0);
    const auto ord = energy_identity_order(rec, {4, 2, 1}, p);
    c.value = ord.order;
    c.tolerance = 1.8;
    c.pass = ord.order >= c.tolerance;
    std::ostringstream d;
    d << "mean residuals";
    for (double r : ord.mean_residual) d << ' ' << io::format_double(r);
    c.detail = d.str();
    return timer.done(c);
}

CheckResult check_ou_variance(const RunConfig& cfg, int draws) {
    Timer timer;
    CheckResult c;
    c.name = "ou_statistics";
    ModelParams p = cfg.model();
    p.modes_x = p.modes_y = 2;  // retains modes (1,1), (1,2), (2,1), (2,2)
    const auto rep = ou_variance_test(cfg.noise(), p, 0.05, draws, cfg.seed);
    int pass = 0, total = 0;
    std::ostringstream d;
    for (const auto& e : rep.entries) {
        if (total == 3) break;  // the three leading retained modes
        ++total;
        if (e.pass) ++pass;
        d << '(' << e.mode.m << ',' << e.mode.n << ") var " << io::format_double(e.sample_var)
          << " in [" << io::format_double(e.lo) << ", " << io::format_double(e.hi) << "] ";
    }
    c.value = double(pass);
    c.tolerance = double(total);
    c.pass = pass == total;
    c.detail = d.str();
    return timer.done(c);
}

CheckResult check_summability() {
    Timer timer;
    CheckResult c;
    c.name = "summability_classifier";
    struct Case {
        double gamma, s;
        SummabilityVerdict expect;
    };
    const Case cases[] = {
        {0.5, 1.0, SummabilityVerdict::converges},  {0.5, 0.25, SummabilityVerdict::diverges},
        {0.3, 0.35, SummabilityVerdict::converges}, {0.3, 0.25, SummabilityVerdict::diverges},
        {0.8, 0.85, SummabilityVerdict::converges}, {0.8, 0.75, SummabilityVerdict::diverges},
    };
    int correct = 0;
    for (const auto& k : cases) {
        NoiseSpec spec;
        spec.gamma = k.gamma;
        spec.mu_exponent = k.s;
        if (check_summability(spec, 1.0, 4096).verdict == k.expect) ++correct;
    }
    c.value = double(correct);
    c.tolerance = 6.0;
    c.pass = correct == 6;
    c.detail = "(gamma, s) pairs straddling s = gamma";
    return timer.done(c);
}

CheckResult check_gronwall_monitor(const RunConfig& cfg, int n_traj, double T) {
    Timer timer;
    CheckResult c;
    c.name = "gronwall_monitor";
    EnsembleConfig ec;
    ec.n_traj = n_traj;
    ec.base_seed = cfg.seed;
    ec.params = cfg.model();
    ec.noise = cfg.noise();
    ec.omega0 = random_field(ec.params.modes_x, ec.params.modes_y, 1.0, cfg.seed, 7);
    ec.T = T;
    ec.h = cfg.dt;
    ec.scheme = Scheme::split;
    ec.workers = 4;
    ec.sim.record_stride = cfg.record_stride;
    ec.keep_records = true;
    const auto res = run_ensemble(ec);
    long violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& rec : res.records) {
        const auto rep = monitor_bound(rec, ec.params);
        if (!rep.satisfied) ++violations;
        min_margin = std::min(min_margin, rep.min_margin_log);
    }
    c.value = double(res.stats.total_blowups + violations);
    c.tolerance = 0.0;
    c.pass = res.stats.total_blowups == 0 && violations == 0;
    c.detail = std::to_string(n_traj) + " trajectories, T=" + io::format_double(T) +
               ", min log-margin " + io::format_double(min_margin);
    return timer.done(c);
}

CheckResult check_strong_convergence(const RunConfig& cfg, int paths) {
    Timer timer;
    CheckResult c;
    c.name = "strong_convergence";
    ModelParams p = cfg.model();
    p.modes_x = p.modes_y = 16;
    const SpectralField omega0 = random_field(16, 16, 1.0, cfg.seed, 3);
    const auto ladder =
        convergence_ladder(p, cfg.noise(), omega0, 0.5, 0.02, 4, paths, Scheme::mild_em, cfg.seed);
    c.value = ladder.slope;
    c.tolerance = 0.6;  // acceptance window [0.6, 1.3]
    c.pass = !ladder.exact && ladder.slope >= 0.6 && ladder.slope <= 1.3;
    std::ostringstream d;
    d << "rms errors";
    for (double e : ladder.rms_error) d << ' ' << io::format_double(e);
    c.detail = d.str();
    return timer.done(c);
}

CheckResult check_reproducibility(const RunConfig& cfg) {
    Timer timer;
    CheckResult c;
    c.name = "reproducibility";
    EnsembleConfig ec;
    ec.n_traj = 4;
    ec.base_seed = cfg.seed;
    ec.params = cfg.model();
    ec.noise = cfg.noise();
    ec.omega0 = random_field(ec.params.modes_x, ec.params.modes_y, 1.0, cfg.seed, 11);
    ec.T = 0.1;
    ec.h = 1e-3;
    ec.scheme = cfg.scheme_enum();
    ec.keep_records = true;
    ec.sim.record_stride = 10;

    auto csvs = [&](int workers) {
        EnsembleConfig e = ec;
        e.workers = workers;
        const auto res = run_ensemble(e);
        std::string all;
        for (const auto& rec : res.records)
            all += io::trajectory_csv(rec, monitor_bound(rec, e.params), {});
        return all;
    };
    const std::string one = csvs(1), four = csvs(4);
    c.value = one == four ? 0.0 : 1.0;
    c.tolerance = 0.0;
    c.pass = one == four;
    c.detail = "per-trajectory CSVs, workers {1,4}";
    return timer.done(c);
}

CheckResult check_hypothesis_constants(const RunConfig& cfg, const BatteryProfile& prof) {
    Timer timer;
    CheckResult c;
    c.name = "hypothesis_constants";
    const double nu = cfg.nu;
    const auto eb = eigenfunction_bounds_check(prof.bounds_modes, prof.bounds_modes, nu);
    const bool sup_exact = eb.c_sup == 2.0;
    const bool grad_uniform = eb.c_grad_ratio <= 2.0 / std::sqrt(nu) + 1e-12;
    const bool grad_diagonal =
        std::abs(eb.c_grad_ratio_diagonal - std::sqrt(2.0 / nu)) <= 1e-9 * std::sqrt(2.0 / nu);
    const auto kap = kappa_estimate(prof.kappa_samples, prof.kappa_rho_grid, cfg.seed);
    const double ref = kappa_reference(prof.kappa_rho_grid);
    const double kap_rel = std::abs(kap.kappa - ref) / ref;
    c.pass = sup_exact && grad_uniform && grad_diagonal && kap.kappa > 0.0 && kap_rel <= 0.05;
    c.value = kap_rel;
    c.tolerance = 0.05;
    c.detail = "C_sup=" + io::format_double(eb.c_sup) +
               " grad_ratio=" + io::format_double(eb.c_grad_ratio) +
               " (diagonal " + io::format_double(eb.c_grad_ratio_diagonal) + ")" +
               " kappa=" + io::format_double(kap.kappa) + " ref=" + io::format_double(ref);
    return timer.done(c);
}

CheckResult check_throughput(const RunConfig& cfg) {
    Timer timer;
    CheckResult c;
    c.name = "throughput_scaling(info)";
    EnsembleConfig ec;
    ec.n_traj = 8;
    ec.base_seed = cfg.seed;
    ec.params = cfg.model();
    ec.params.modes_x = ec.params.modes_y = 16;
    ec.noise = cfg.noise();
    ec.omega0 = random_field(16, 16, 1.0, cfg.seed, 13);
    ec.T = 0.25;
    ec.h = 1e-3;
    auto run_with = [&](int workers) {
        EnsembleConfig e = ec;
        e.workers = workers;
        const auto t0 = Clock::now();
        run_ensemble(e);
        return seconds_since(t0);
    };
    const double t1 = run_with(1);
    const double t4 = run_with(4);
    c.value = t1 / t4;
    c.tolerance = 0.0;
    c.pass = true;  // informational
    c.detail = "speedup 1->4 workers (hardware dependent)";
    return timer.done(c);
}

}  // namespace

BatteryProfile BatteryProfile::quick() { return BatteryProfile{}; }

BatteryProfile BatteryProfile::full() {
    BatteryProfile p;
    p.jac_pairs = 100;
    p.monitor_traj = 100;
    p.monitor_T = 2.0;
    p.ladder_paths = 64;
    p.ou_draws = 10000;
    p.bounds_modes = 64;
    p.kappa_samples = 100000;
    p.kappa_rho_grid = 64;
    p.throughput_info = true;
    return p;
}

std::string format_check(const CheckResult& c) {
    std::ostringstream os;
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": value=" << io::format_double(c.value)
       << " tol=" << io::format_double(c.tolerance) << " (" << c.detail << ") ["
       << io::format_double(c.seconds) << "s]";
    return os.str();
}

std::vector<CheckResult> run_battery(const RunConfig& cfg, const BatteryProfile& profile,
                                     std::ostream* log) {
    std::vector<CheckResult> results;
    auto push = [&](CheckResult c) {
        if (log) *log << format_check(c) << '\n' << std::flush;
        results.push_back(std::move(c));
    };
    push(check_spectral_exactness());
    push(check_jacobian_orthogonality(cfg, profile.jac_pairs));
    push(check_linear_oracle(cfg));
    push(check_energy_decay(cfg));
    push(check_energy_identity(cfg));
    push(check_ou_variance(cfg, profile.ou_draws));
    push(check_summability());
    push(check_gronwall_monitor(cfg, profile.monitor_traj, profile.monitor_T));
    push(check_strong_convergence(cfg, profile.ladder_paths));
    push(check_reproducibility(cfg));
    push(check_hypothesis_constants(cfg, profile));
    if (profile.throughput_info) push(check_throughput(cfg));
    return results;
}

}  // namespace qgstorm
