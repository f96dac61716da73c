#include "qgstorm/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "qgstorm/io.hpp"

namespace qgstorm {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key, const std::string& ctx) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(ctx + ": value for '" + key + "' is not a number: '" + v + "'");
    return x;
}

long parse_long(const std::string& v, const std::string& key, const std::string& ctx) {
    long x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError(ctx + ": value for '" + key + "' is not an integer: '" + v + "'");
    return x;
}

bool parse_bool(const std::string& v, const std::string& key, const std::string& ctx) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError(ctx + ": value for '" + key + "' is not a boolean: '" + v + "'");
}

}  // namespace

ModelParams RunConfig::model() const {
    ModelParams p;
    p.nu = nu;
    p.r = r;
    p.beta = beta;
    p.modes_x = modes_x;
    p.modes_y = modes_y;
    p.dealias_factor = dealias;
    return p;
}

NoiseSpec RunConfig::noise() const {
    NoiseSpec spec;
    spec.gamma = gamma;
    if (mu_rule == "power")
        spec.mu_rule = MuRule::power;
    else if (mu_rule == "band")
        spec.mu_rule = MuRule::band;
    else if (mu_rule == "constant")
        spec.mu_rule = MuRule::constant;
    else
        throw ConfigError("mu_rule must be one of power|band|constant, got '" + mu_rule + "'");
    spec.mu_exponent = mu_exponent;
    spec.mu_band = mu_band;
    return spec;
}

Scheme RunConfig::scheme_enum() const {
    if (scheme == "mild_em") return Scheme::mild_em;
    if (scheme == "split") return Scheme::split;
    throw ConfigError("scheme must be mild_em or split, got '" + scheme + "'");
}

int RunConfig::effective_workers() const {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("QGSTORM_WORKERS")) {
        const long w = std::strtol(env, nullptr, 10);
        if (w >= 1) return int(w);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

std::string RunConfig::echo() const {
    std::ostringstream os;
    os << "nu=" << io::format_double(nu) << '\n';
    os << "r=" << io::format_double(r) << '\n';
    os << "beta=" << io::format_double(beta) << '\n';
    os << "modes=" << modes_x << 'x' << modes_y << '\n';
    os << "dealias=" << io::format_double(dealias) << '\n';
    os << "gamma=" << io::format_double(gamma) << '\n';
    os << "mu_rule=" << mu_rule << '\n';
    os << "mu_exponent=" << io::format_double(mu_exponent) << '\n';
    os << "mu_band=" << mu_band << '\n';
    os << "seed=" << seed << '\n';
    os << "T=" << io::format_double(T) << '\n';
    os << "dt=" << io::format_double(dt) << '\n';
    os << "scheme=" << scheme << '\n';
    os << "n_traj=" << n_traj << '\n';
    os << "workers=" << workers << '\n';
    os << "record_stride=" << record_stride << '\n';
    os << "snapshots=" << (snapshots ? "true" : "false") << '\n';
    os << "snapshot_stride=" << snapshot_stride << '\n';
    os << "out=" << out << '\n';
    os << "strict=" << (strict ? "true" : "false") << '\n';
    os << "blowup_cap=" << io::format_double(blowup_cap) << '\n';
    os << "sum_kmax=" << sum_kmax << '\n';
    os << "kappa_samples=" << kappa_samples << '\n';
    os << "kappa_rho_grid=" << kappa_rho_grid << '\n';
    return os.str();
}

void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value,
                     const std::string& ctx) {
    if (key == "nu") {
        cfg.nu = parse_double(value, key, ctx);
        if (!(cfg.nu > 0.0)) throw ConfigError(ctx + ": nu must be positive");
    } else if (key == "r") {
        cfg.r = parse_double(value, key, ctx);
        if (cfg.r < 0.0) throw ConfigError(ctx + ": r must be nonnegative");
    } else if (key == "beta") {
        cfg.beta = parse_double(value, key, ctx);
        if (cfg.beta < 0.0) throw ConfigError(ctx + ": beta must be nonnegative");
    } else if (key == "modes") {
        const auto x = value.find('x');
        const std::string first = x == std::string::npos ? value : value.substr(0, x);
        const long m = parse_long(first, key, ctx);
        const long n = x == std::string::npos ? m : parse_long(value.substr(x + 1), key, ctx);
        if (m < 1 || n < 1 || m > 4096 || n > 4096)
            throw ConfigError(ctx + ": modes must lie in [1, 4096]");
        cfg.modes_x = int(m);
        cfg.modes_y = int(n);
    } else if (key == "dealias") {
        cfg.dealias = parse_double(value, key, ctx);
        if (cfg.dealias < 1.0) throw ConfigError(ctx + ": dealias must be >= 1");
    } else if (key == "gamma") {
        cfg.gamma = parse_double(value, key, ctx);
        if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
            throw ConfigError(ctx + ": gamma must lie in (0,1)");
    } else if (key == "mu_rule") {
        if (value != "power" && value != "band" && value != "constant")
            throw ConfigError(ctx + ": mu_rule must be one of power|band|constant");
        cfg.mu_rule = value;
    } else if (key == "mu_exponent") {
        cfg.mu_exponent = parse_double(value, key, ctx);
    } else if (key == "mu_band") {
        const long b = parse_long(value, key, ctx);
        if (b < 0) throw ConfigError(ctx + ": mu_band must be nonnegative");
        cfg.mu_band = int(b);
    } else if (key == "seed") {
        cfg.seed = uint64_t(parse_long(value, key, ctx));
    } else if (key == "T") {
        cfg.T = parse_double(value, key, ctx);
        if (!(cfg.T > 0.0)) throw ConfigError(ctx + ": T must be positive");
    } else if (key == "dt") {
        cfg.dt = parse_double(value, key, ctx);
        if (!(cfg.dt > 0.0)) throw ConfigError(ctx + ": dt must be positive");
    } else if (key == "scheme") {
        if (value != "mild_em" && value != "split")
            throw ConfigError(ctx + ": scheme must be mild_em or split");
        cfg.scheme = value;
    } else if (key == "n_traj") {
        const long n = parse_long(value, key, ctx);
        if (n < 1) throw ConfigError(ctx + ": n_traj must be >= 1");
        cfg.n_traj = int(n);
    } else if (key == "workers") {
        const long w = parse_long(value, key, ctx);
        if (w < 0) throw ConfigError(ctx + ": workers must be >= 0");
        cfg.workers = int(w);
    } else if (key == "record_stride") {
        const long s = parse_long(value, key, ctx);
        if (s < 1) throw ConfigError(ctx + ": record_stride must be >= 1");
        cfg.record_stride = int(s);
    } else if (key == "snapshots") {
        cfg.snapshots = parse_bool(value, key, ctx);
    } else if (key == "snapshot_stride") {
        const long s = parse_long(value, key, ctx);
        if (s < 1) throw ConfigError(ctx + ": snapshot_stride must be >= 1");
        cfg.snapshot_stride = int(s);
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "strict") {
        cfg.strict = parse_bool(value, key, ctx);
    } else if (key == "blowup_cap") {
        cfg.blowup_cap = parse_double(value, key, ctx);
        if (!(cfg.blowup_cap > 0.0)) throw ConfigError(ctx + ": blowup_cap must be positive");
    } else if (key == "sum_kmax") {
        const long k = parse_long(value, key, ctx);
        if (k < 100) throw ConfigError(ctx + ": sum_kmax must be at least 100");
        cfg.sum_kmax = int(k);
    } else if (key == "kappa_samples") {
        const long s = parse_long(value, key, ctx);
        if (s < 10000) throw ConfigError(ctx + ": kappa_samples must be at least 10000");
        cfg.kappa_samples = s;
    } else if (key == "kappa_rho_grid") {
        const long g = parse_long(value, key, ctx);
        if (g < 1) throw ConfigError(ctx + ": kappa_rho_grid must be >= 1");
        cfg.kappa_rho_grid = int(g);
    } else {
        throw ConfigError(ctx + ": unknown key '" + key + "'");
    }
}

RunConfig parse_config_text(const std::string& text, const std::string& filename) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string ctx = filename + ":" + std::to_string(lineno);
        if (eq == std::string::npos)
            throw ConfigError(ctx + ": malformed line (expected key=value): '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(ctx + ": empty key");
        apply_key_value(cfg, key, value, ctx);
    }
    validate_config(cfg);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str(), path);
}

void validate_config(const RunConfig& cfg) {
    cfg.model().validate();
    cfg.noise().validate();
    (void)cfg.scheme_enum();
    if (!(cfg.dt <= cfg.T)) throw ConfigError("dt must not exceed T");
}

}  // namespace qgstorm
