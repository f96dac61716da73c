#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>

#include "qgstorm/cli.hpp"

namespace {

struct FlagSet {
    std::optional<std::string> config_path;
    std::optional<double> nu, r, beta, gamma, dealias, T, dt, mu_exponent, blowup_cap;
    std::optional<std::string> modes, mu_rule, scheme, out;
    std::optional<long> seed, n_traj, workers, record_stride, mu_band, sum_kmax, kappa_samples,
        kappa_rho_grid, snapshot_stride;
    bool strict = false;
    bool snapshots = false;
    bool full = false;
};

void add_common_flags(CLI::App* app, FlagSet& f) {
    app->add_option("--config", f.config_path, "key=value config file");
    app->add_option("--nu", f.nu, "viscous dissipation (default 0.01)");
    app->add_option("--r", f.r, "Ekman dissipation (default 0.1)");
    app->add_option("--beta", f.beta, "Coriolis gradient (default 1)");
    app->add_option("--gamma", f.gamma, "noise exponent in (0,1) (default 0.5)");
    app->add_option("--modes", f.modes, "truncation, e.g. 32 or 32x32");
    app->add_option("--dealias", f.dealias, "dealiasing grid factor (default 1.5)");
    app->add_option("--mu-rule", f.mu_rule, "power | band | constant");
    app->add_option("--mu-exponent", f.mu_exponent, "s in mu = (m^2+n^2)^-s");
    app->add_option("--mu-band", f.mu_band, "band size for the band rule");
    app->add_option("--dt", f.dt, "time step (default 1e-3)");
    app->add_option("--T", f.T, "final time (default 1)");
    app->add_option("--seed", f.seed, "base seed (default 1)");
    app->add_option("--scheme", f.scheme, "mild_em | split");
    app->add_option("--n-traj", f.n_traj, "ensemble size (default 100)");
    app->add_option("--workers", f.workers, "worker threads (0 = auto/QGSTORM_WORKERS)");
    app->add_option("--record-stride", f.record_stride, "steps between records (default 10)");
    app->add_option("--out", f.out, "output path");
    app->add_option("--blowup-cap", f.blowup_cap, "l2 blow-up guard (default 1e8)");
    app->add_option("--kmax", f.sum_kmax, "summability partial-sum length");
    app->add_option("--kappa-samples", f.kappa_samples, "MC samples per (rho, center) cell");
    app->add_option("--kappa-rho-grid", f.kappa_rho_grid, "number of rho values");
    app->add_option("--snapshot-stride", f.snapshot_stride, "steps between snapshots");
    app->add_flag("--snapshots", f.snapshots, "write QGSF field snapshots");
    app->add_flag("--strict", f.strict, "nonzero exit when hypotheses fail");
}

int build_config(const FlagSet& f, qgstorm::RunConfig& cfg, std::ostream& err) {
    using qgstorm::apply_key_value;
    try {
        if (f.config_path) cfg = qgstorm::parse_config_file(*f.config_path);
        auto set = [&](const char* key, const auto& opt) {
            if (opt) {
                std::ostringstream v;
                v << *opt;
                apply_key_value(cfg, key, v.str(), std::string("--") + key);
            }
        };
        set("nu", f.nu);
        set("r", f.r);
        set("beta", f.beta);
        set("gamma", f.gamma);
        set("modes", f.modes);
        set("dealias", f.dealias);
        set("mu_rule", f.mu_rule);
        set("mu_exponent", f.mu_exponent);
        set("mu_band", f.mu_band);
        set("dt", f.dt);
        set("T", f.T);
        set("seed", f.seed);
        set("scheme", f.scheme);
        set("n_traj", f.n_traj);
        set("workers", f.workers);
        set("record_stride", f.record_stride);
        set("out", f.out);
        set("blowup_cap", f.blowup_cap);
        set("sum_kmax", f.sum_kmax);
        set("kappa_samples", f.kappa_samples);
        set("kappa_rho_grid", f.kappa_rho_grid);
        set("snapshot_stride", f.snapshot_stride);
        if (f.snapshots) cfg.snapshots = true;
        if (f.strict) cfg.strict = true;
        qgstorm::validate_config(cfg);
        return qgstorm::cli::kOk;
    } catch (const qgstorm::ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return qgstorm::cli::kConfigError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral solver and verification harness for the randomly forced "
                 "dissipative quasigeostrophic equation on the unit square"};
    app.require_subcommand(1);

    FlagSet fs, fe, fv, fn;
    auto* sim = app.add_subcommand("simulate", "integrate one trajectory, write trajectory CSV");
    add_common_flags(sim, fs);
    auto* ens = app.add_subcommand("ensemble", "run a trajectory ensemble, write summary CSV");
    add_common_flags(ens, fe);
    auto* ver = app.add_subcommand("verify", "run the invariant battery");
    add_common_flags(ver, fv);
    ver->add_flag("--full", fv.full, "acceptance-scale ensembles (slower)");
    auto* noi = app.add_subcommand("noise-check",
                                   "summability verdict, eigenfunction bounds, kappa estimate");
    add_common_flags(noi, fn);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? qgstorm::cli::kOk : qgstorm::cli::kConfigError;
    }

    qgstorm::RunConfig cfg;
    if (sim->parsed()) {
        if (int rc = build_config(fs, cfg, std::cerr)) return rc;
        return qgstorm::cli::cmd_simulate(cfg, std::cout, std::cerr);
    }
    if (ens->parsed()) {
        if (int rc = build_config(fe, cfg, std::cerr)) return rc;
        return qgstorm::cli::cmd_ensemble(cfg, std::cout, std::cerr);
    }
    if (ver->parsed()) {
        if (int rc = build_config(fv, cfg, std::cerr)) return rc;
        return qgstorm::cli::cmd_verify(cfg, fv.full, std::cout, std::cerr);
    }
    if (noi->parsed()) {
        if (int rc = build_config(fn, cfg, std::cerr)) return rc;
        return qgstorm::cli::cmd_noise_check(cfg, std::cout, std::cerr);
    }
    return qgstorm::cli::kConfigError;
}
