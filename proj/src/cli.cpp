#include "qgstorm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "qgstorm/io.hpp"
#include "qgstorm/verification.hpp"

namespace qgstorm::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<std::string> metadata_lines(const RunConfig& cfg) {
    std::vector<std::string> lines;
    lines.push_back(std::string("qgstorm ") + kVersion);
    std::istringstream echo(cfg.echo());
    std::string l;
    while (std::getline(echo, l)) lines.push_back(l);
    const auto sum = check_summability(cfg.noise(), cfg.nu, cfg.sum_kmax);
    const char* verdict = sum.verdict == SummabilityVerdict::converges   ? "converges"
                          : sum.verdict == SummabilityVerdict::diverges ? "diverges"
                                                                        : "inconclusive";
    lines.push_back(std::string("summability=") + verdict);
    return lines;
}

SpectralField initial_field(const RunConfig& cfg) {
    // smooth seeded initial data with unit l2 norm
    SpectralField f = SpectralField::zero(cfg.modes_x, cfg.modes_y);
    const uint64_t stream = rng::stream_key(cfg.seed, 0x1C0Dull);
    for (int i = 0; i < cfg.modes_x; ++i)
        for (int j = 0; j < cfg.modes_y; ++j) {
            const double decay =
                1.0 / (1.0 + 0.1 * (double(i + 1) * (i + 1) + double(j + 1) * (j + 1)));
            f.coeffs(i, j) = decay * rng::normal(stream, uint32_t(i + 1), uint32_t(j + 1), 0,
                                                 rng::Tag::generic);
        }
    f.coeffs /= f.coeffs.norm();
    return f;
}

std::string out_path(const RunConfig& cfg, const std::string& fallback) {
    return cfg.out.empty() ? fallback : cfg.out;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate_config(cfg);
        const std::string path = out_path(cfg, "trajectory.csv");
        SimOptions opts;
        opts.record_stride = cfg.record_stride;
        opts.blowup_cap = cfg.blowup_cap;
        std::vector<std::pair<double, SpectralField>> snaps;
        if (cfg.snapshots) {
            opts.snapshot_stride = cfg.snapshot_stride;
            opts.snapshot_sink = [&](double t, const SpectralField& f) {
                snaps.emplace_back(t, f);
            };
        }
        const auto rec = simulate(cfg.model(), cfg.noise(), initial_field(cfg), cfg.T, cfg.dt,
                                  cfg.scheme_enum(), opts, cfg.seed, 0);
        const auto monitor = monitor_bound(rec, cfg.model());
        io::write_text_file(path, io::trajectory_csv(rec, monitor, metadata_lines(cfg)));
        for (const auto& [t, f] : snaps) {
            char stamp[32];
            std::snprintf(stamp, sizeof stamp, "%.6f", t);  // exact time lives in the file
            io::write_snapshot_file(path + "." + stamp + ".qgsf", f, t);
        }
        out << "wrote " << path << " (" << rec.size() << " records)\n";
        if (rec.aborted) {
            err << "simulate: " << rec.abort_reason << "\n";
            return kRuntimeError;
        }
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

int cmd_ensemble(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate_config(cfg);
        const std::string path = out_path(cfg, "ensemble.csv");
        EnsembleConfig ec;
        ec.n_traj = cfg.n_traj;
        ec.base_seed = cfg.seed;
        ec.params = cfg.model();
        ec.noise = cfg.noise();
        ec.omega0 = initial_field(cfg);
        ec.T = cfg.T;
        ec.h = cfg.dt;
        ec.scheme = cfg.scheme_enum();
        ec.workers = cfg.effective_workers();
        ec.sim.record_stride = cfg.record_stride;
        ec.sim.blowup_cap = cfg.blowup_cap;
        const auto res = run_ensemble(ec);
        io::write_text_file(path, io::ensemble_csv(res.stats, metadata_lines(cfg)));
        out << "wrote " << path << " (" << res.stats.t.size() << " records, "
            << res.stats.total_blowups << " blow-ups)\n";
        if (res.stats.total_blowups > 0) {
            err << "ensemble: " << res.stats.total_blowups << " trajectories hit the blow-up guard\n";
            return kRuntimeError;
        }
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

int cmd_verify(const RunConfig& cfg, bool full, std::ostream& out, std::ostream& err) {
    try {
        validate_config(cfg);
        const auto profile = full ? BatteryProfile::full() : BatteryProfile::quick();
        const auto results = run_battery(cfg, profile, &out);
        int failures = 0;
        for (const auto& c : results)
            if (!c.pass) ++failures;
        if (failures > 0) {
            err << failures << " check(s) failed:";
            for (const auto& c : results)
                if (!c.pass) err << ' ' << c.name;
            err << "\n";
            return kVerificationFailure;
        }
        out << "all " << results.size() << " checks passed\n";
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

int cmd_noise_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate_config(cfg);
        const auto rep = check_summability(cfg.noise(), cfg.nu, cfg.sum_kmax);
        const char* verdict = rep.verdict == SummabilityVerdict::converges   ? "converges"
                              : rep.verdict == SummabilityVerdict::diverges ? "diverges"
                                                                            : "inconclusive";
        out << "summability: " << verdict << " (" << rep.detail << ")\n";
        if (!rep.partial_sums.empty())
            out << "partial sum at kmax: " << io::format_double(rep.partial_sums.back()) << "\n";

        const auto eb = eigenfunction_bounds_check(cfg.modes_x, cfg.modes_y, cfg.nu);
        out << "eigenfunction bounds: C_sup=" << io::format_double(eb.c_sup)
            << " grad_ratio=" << io::format_double(eb.c_grad_ratio)
            << " (bound 2/sqrt(nu)=" << io::format_double(2.0 / std::sqrt(cfg.nu)) << ")\n";

        const auto kap = kappa_estimate(cfg.kappa_samples, cfg.kappa_rho_grid, cfg.seed);
        out << "kappa estimate: " << io::format_double(kap.kappa) << " at rho="
            << io::format_double(kap.argmin_rho) << " center=(" << kap.argmin_cx << ","
            << kap.argmin_cy << ")\n";

        const bool hypotheses_ok = rep.verdict == SummabilityVerdict::converges && eb.sup_ok &&
                                   eb.grad_ok && kap.kappa > 0.0;
        if (cfg.strict && !hypotheses_ok) {
            err << "noise-check: hypotheses not satisfied\n";
            return kVerificationFailure;
        }
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

}  // namespace qgstorm::cli
