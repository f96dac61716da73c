#pragma once

#include <iosfwd>

#include "qgstorm/config.hpp"

namespace qgstorm {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // measured quantity
    double tolerance = 0.0;  // threshold it was compared against
    std::string detail;
    double seconds = 0.0;
};

// The invariant battery behind `verify`. The full profile runs every check at
// the documented thresholds and ensemble sizes; the quick profile shrinks
// ensembles and horizons for interactive use while keeping every threshold.
struct BatteryProfile {
    int jac_pairs = 20;
    int monitor_traj = 8;
    double monitor_T = 0.5;
    int ladder_paths = 12;
    int ou_draws = 4000;
    int bounds_modes = 32;
    long kappa_samples = 20000;
    int kappa_rho_grid = 16;
    bool throughput_info = false;

    static BatteryProfile quick();
    static BatteryProfile full();
};

// Runs all checks; progress lines go to `log` if non-null.
std::vector<CheckResult> run_battery(const RunConfig& cfg, const BatteryProfile& profile,
                                     std::ostream* log = nullptr);

std::string format_check(const CheckResult& c);

}  // namespace qgstorm
