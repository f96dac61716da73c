#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgstorm/ensemble.hpp"

namespace qgstorm {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat key=value run configuration with '#' comments. Every field has a
// documented default; parsing rejects unknown keys and out-of-range values
// with the offending name and line.
struct RunConfig {
    double nu = 1e-2;
    double r = 0.1;
    double beta = 1.0;
    int modes_x = 32, modes_y = 32;
    double dealias = 1.5;
    double gamma = 0.5;
    std::string mu_rule = "power";  // power | band | constant
    double mu_exponent = 1.0;
    int mu_band = 10;
    uint64_t seed = 1;
    double T = 1.0;
    double dt = 1e-3;
    std::string scheme = "mild_em";  // mild_em | split
    int n_traj = 100;
    int workers = 0;  // 0: QGSTORM_WORKERS env or hardware
    int record_stride = 10;
    bool snapshots = false;
    int snapshot_stride = 100;
    std::string out;  // empty: per-command default
    bool strict = false;
    double blowup_cap = 1e8;
    int sum_kmax = 20000;
    long kappa_samples = 100000;
    int kappa_rho_grid = 64;

    ModelParams model() const;
    NoiseSpec noise() const;
    Scheme scheme_enum() const;
    int effective_workers() const;

    // Canonical echo; parse(echo(cfg)) == cfg.
    std::string echo() const;
    bool operator==(const RunConfig&) const = default;
};

// Apply "key=value" to cfg; context names the source (file:line or flag).
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value,
                     const std::string& context);

RunConfig parse_config_text(const std::string& text, const std::string& filename = "<config>");
RunConfig parse_config_file(const std::string& path);

// Post-parse consistency checks shared by file and flag paths.
void validate_config(const RunConfig& cfg);

}  // namespace qgstorm
