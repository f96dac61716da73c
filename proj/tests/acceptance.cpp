// Acceptance suite: runs the full verification battery on the default
// configuration and reports one line per criterion, including the wall-clock
// budget each criterion must meet. Exits nonzero if any criterion fails.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "qgstorm/battery.hpp"
#include "qgstorm/io.hpp"

int main() {
    using namespace qgstorm;

    RunConfig cfg;  // documented defaults
    const BatteryProfile profile = BatteryProfile::full();

    std::cout << "running acceptance battery (defaults: nu=" << cfg.nu << " r=" << cfg.r
              << " beta=" << cfg.beta << " gamma=" << cfg.gamma << " modes=" << cfg.modes_x << "x"
              << cfg.modes_y << " dt=" << cfg.dt << " seed=" << cfg.seed << ")\n"
              << std::flush;

    const auto results = run_battery(cfg, profile, &std::cout);
    std::cout << "\ncriterion summary:\n";

    // criterion number and runtime budget (seconds) per check name
    const std::map<std::string, std::pair<int, double>> plan = {
        {"spectral_exactness", {1, 1.0}},    {"jacobian_orthogonality", {2, 10.0}},
        {"linear_oracle", {3, 1.0}},         {"energy_decay", {4, 30.0}},
        {"energy_identity_order", {5, 60.0}}, {"ou_statistics", {6, 30.0}},
        {"summability_classifier", {7, 1.0}}, {"gronwall_monitor", {8, 600.0}},
        {"strong_convergence", {9, 600.0}},  {"reproducibility", {10, 60.0}},
        {"hypothesis_constants", {11, 60.0}},
    };

    int failures = 0;
    for (const auto& c : results) {
        const auto it = plan.find(c.name);
        if (it == plan.end()) {
            std::cout << "[info] " << c.name << ": value=" << io::format_double(c.value) << " ("
                      << c.detail << ") [" << io::format_double(c.seconds) << "s]\n";
            continue;
        }
        const auto [num, budget] = it->second;
        const bool in_budget = c.seconds < budget;
        const bool pass = c.pass && in_budget;
        if (!pass) ++failures;
        std::printf("[%s] criterion %2d %-24s value=%-12.6g tol=%-10.6g runtime=%.2fs/%.0fs %s\n",
                    pass ? "PASS" : "FAIL", num, c.name.c_str(), c.value, c.tolerance, c.seconds,
                    budget, c.detail.c_str());
        std::fflush(stdout);
    }

    if (failures == 0)
        std::cout << "acceptance: all 11 criteria satisfied\n";
    else
        std::cout << "acceptance: " << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}
