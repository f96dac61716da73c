#include "qgstorm/mode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgstorm {

namespace {
constexpr double kPi = std::numbers::pi;

void check_mode(Mode mode) {
    if (mode.m < 1 || mode.n < 1)
        throw std::domain_error("Mode indices must satisfy m >= 1 and n >= 1");
}

void check_point(double x, double y) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
        throw std::domain_error("point outside the closed unit square");
}
}  // namespace

double eigenvalue(Mode mode, double nu) {
    check_mode(mode);
    if (!(nu > 0.0)) throw std::domain_error("eigenvalue: nu must be positive");
    const double k2 = double(mode.m) * mode.m + double(mode.n) * mode.n;
    return -nu * k2 * kPi * kPi;
}

double basis_eval(Mode mode, double x, double y) {
    check_mode(mode);
    check_point(x, y);
    return 2.0 * std::sin(mode.m * kPi * x) * std::sin(mode.n * kPi * y);
}

double basis_dx(Mode mode, double x, double y) {
    check_mode(mode);
    check_point(x, y);
    return 2.0 * mode.m * kPi * std::cos(mode.m * kPi * x) * std::sin(mode.n * kPi * y);
}

double basis_dy(Mode mode, double x, double y) {
    check_mode(mode);
    check_point(x, y);
    return 2.0 * mode.n * kPi * std::sin(mode.m * kPi * x) * std::cos(mode.n * kPi * y);
}

std::vector<Mode> ordered_modes(int modes_x, int modes_y) {
    if (modes_x < 1 || modes_y < 1)
        throw std::domain_error("ordered_modes: truncation must be at least 1x1");
    std::vector<Mode> modes;
    modes.reserve(static_cast<size_t>(modes_x) * modes_y);
    for (int m = 1; m <= modes_x; ++m)
        for (int n = 1; n <= modes_y; ++n) modes.push_back({m, n});
    std::stable_sort(modes.begin(), modes.end(), [](Mode a, Mode b) {
        const long ka = long(a.m) * a.m + long(a.n) * a.n;
        const long kb = long(b.m) * b.m + long(b.n) * b.n;
        if (ka != kb) return ka < kb;
        return a.m < b.m;
    });
    return modes;
}

}  // namespace qgstorm
