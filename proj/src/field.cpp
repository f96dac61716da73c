#include "qgstorm/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgstorm {

namespace {
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

Eigen::MatrixXd symbol(int modes_x, int modes_y) {
    Eigen::MatrixXd s(modes_x, modes_y);
    for (int i = 0; i < modes_x; ++i)
        for (int j = 0; j < modes_y; ++j)
            s(i, j) = -(double(i + 1) * (i + 1) + double(j + 1) * (j + 1)) * kPi2;
    return s;
}
}  // namespace

GridSpec GridSpec::dealiased(int modes_x, int modes_y, double factor) {
    if (factor < 1.0) throw std::domain_error("dealias factor must be >= 1");
    GridSpec g;
    g.nx = int(std::ceil(modes_x * factor));
    g.ny = int(std::ceil(modes_y * factor));
    g.dealias_factor = factor;
    return g;
}

SpectralField SpectralField::single(Mode mode, int modes_x, int modes_y, double amplitude) {
    if (mode.m > modes_x || mode.n > modes_y)
        throw std::domain_error("single-mode field: mode outside truncation");
    SpectralField f = zero(modes_x, modes_y);
    f.at(mode) = amplitude;
    return f;
}

Norms norms(const SpectralField& f) {
    Norms out;
    out.l2 = f.coeffs.norm();
    double h1sq = 0.0;
    for (int i = 0; i < f.modes_x(); ++i)
        for (int j = 0; j < f.modes_y(); ++j) {
            const double k2 = (double(i + 1) * (i + 1) + double(j + 1) * (j + 1)) * kPi2;
            h1sq += k2 * f.coeffs(i, j) * f.coeffs(i, j);
        }
    out.h1_semi = std::sqrt(h1sq);
    out.sup_estimate = 2.0 * f.coeffs.cwiseAbs().sum();
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    return SpectralField(f.coeffs.cwiseProduct(symbol(f.modes_x(), f.modes_y())));
}

SpectralField invert_laplacian(const SpectralField& w) {
    return SpectralField(w.coeffs.cwiseQuotient(symbol(w.modes_x(), w.modes_y())));
}

double dot(const SpectralField& a, const SpectralField& b) {
    if (a.modes_x() != b.modes_x() || a.modes_y() != b.modes_y())
        throw std::invalid_argument("dot: truncation mismatch");
    return a.coeffs.cwiseProduct(b.coeffs).sum();
}

double grid_dot(const PhysicalField& a, const PhysicalField& b) {
    if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
        throw std::invalid_argument("grid_dot: grid mismatch");
    return a.values.cwiseProduct(b.values).sum() * a.grid.weight();
}

double grid_l2(const PhysicalField& a) { return std::sqrt(grid_dot(a, a)); }

}  // namespace qgstorm
