#include "qgstorm/transform.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace qgstorm {

namespace {
constexpr double kPi = std::numbers::pi;

void require_dealiased(int modes, int nodes) {
    // alias images 2(n+1)-k of product wavenumbers k <= 2M must stay above M
    if (2 * (nodes + 1) <= 3 * modes)
        throw std::domain_error("grid too coarse to dealias quadratic products");
}
}  // namespace

SineTransform::SineTransform(int modes_x, int modes_y, GridSpec grid)
    : mx_(modes_x), my_(modes_y), grid_(grid) {
    if (!grid.conforms(modes_x, modes_y))
        throw std::domain_error("grid coarser than truncation");
    sx_.resize(grid.nx, mx_);
    cx_.resize(grid.nx, mx_);
    for (int i = 0; i < grid.nx; ++i)
        for (int m = 0; m < mx_; ++m) {
            const double a = (m + 1) * kPi * grid.x(i);
            sx_(i, m) = std::sin(a);
            cx_(i, m) = (m + 1) * kPi * std::cos(a);
        }
    sy_.resize(grid.ny, my_);
    cy_.resize(grid.ny, my_);
    for (int j = 0; j < grid.ny; ++j)
        for (int n = 0; n < my_; ++n) {
            const double a = (n + 1) * kPi * grid.y(j);
            sy_(j, n) = std::sin(a);
            cy_(j, n) = (n + 1) * kPi * std::cos(a);
        }
}

const SineTransform& SineTransform::get(int modes_x, int modes_y, GridSpec grid) {
    thread_local std::unordered_map<uint64_t, std::unique_ptr<SineTransform>> cache;
    const uint64_t key = (uint64_t(uint16_t(modes_x))) | (uint64_t(uint16_t(modes_y)) << 16) |
                         (uint64_t(uint16_t(grid.nx)) << 32) | (uint64_t(uint16_t(grid.ny)) << 48);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<SineTransform>(modes_x, modes_y, grid)).first;
    return *it->second;
}

Eigen::MatrixXd SineTransform::synthesize(const Eigen::MatrixXd& coeffs) const {
    return 2.0 * (sx_ * coeffs * sy_.transpose());
}

Eigen::MatrixXd SineTransform::analyze(const Eigen::MatrixXd& values, int modes_x,
                                       int modes_y) const {
    if (modes_x > mx_ || modes_y > my_)
        throw std::domain_error("analyze: requested modes beyond transform truncation");
    const double scale = 2.0 / (double(grid_.nx + 1) * double(grid_.ny + 1));
    return scale * (sx_.leftCols(modes_x).transpose() * values * sy_.leftCols(modes_y));
}

Eigen::MatrixXd SineTransform::dx_grid(const Eigen::MatrixXd& coeffs) const {
    return 2.0 * (cx_ * coeffs * sy_.transpose());
}

Eigen::MatrixXd SineTransform::dy_grid(const Eigen::MatrixXd& coeffs) const {
    return 2.0 * (sx_ * coeffs * cy_.transpose());
}

Eigen::MatrixXd SineTransform::project_dx(const Eigen::MatrixXd& coeffs) const {
    return analyze(dx_grid(coeffs), int(coeffs.rows()), int(coeffs.cols()));
}

Eigen::MatrixXd SineTransform::jacobian(const Eigen::MatrixXd& psi,
                                        const Eigen::MatrixXd& omega) const {
    require_dealiased(int(psi.rows()), grid_.nx);
    require_dealiased(int(psi.cols()), grid_.ny);
    const Eigen::MatrixXd px = dx_grid(psi), py = dy_grid(psi);
    const Eigen::MatrixXd ox = dx_grid(omega), oy = dy_grid(omega);
    const Eigen::MatrixXd j = px.cwiseProduct(oy) - py.cwiseProduct(ox);
    return analyze(j, int(psi.rows()), int(psi.cols()));
}

PhysicalField to_physical(const SpectralField& f, GridSpec grid) {
    const auto& tr = SineTransform::get(f.modes_x(), f.modes_y(), grid);
    return PhysicalField{tr.synthesize(f.coeffs), grid};
}

SpectralField to_spectral(const PhysicalField& p) {
    return to_spectral(p, p.grid.nx, p.grid.ny);
}

SpectralField to_spectral(const PhysicalField& p, int modes_x, int modes_y) {
    const auto& tr = SineTransform::get(modes_x, modes_y, p.grid);
    return SpectralField(tr.analyze(p.values, modes_x, modes_y));
}

std::pair<PhysicalField, PhysicalField> gradient(const SpectralField& f, GridSpec grid) {
    const auto& tr = SineTransform::get(f.modes_x(), f.modes_y(), grid);
    return {PhysicalField{tr.dx_grid(f.coeffs), grid}, PhysicalField{tr.dy_grid(f.coeffs), grid}};
}

SpectralField jacobian(const SpectralField& psi, const SpectralField& omega, GridSpec grid) {
    if (psi.modes_x() != omega.modes_x() || psi.modes_y() != omega.modes_y())
        throw std::invalid_argument("jacobian: truncation mismatch");
    const auto& tr = SineTransform::get(psi.modes_x(), psi.modes_y(), grid);
    return SpectralField(tr.jacobian(psi.coeffs, omega.coeffs));
}

SpectralField project_dx(const SpectralField& f, GridSpec grid) {
    const auto& tr = SineTransform::get(f.modes_x(), f.modes_y(), grid);
    return SpectralField(tr.project_dx(f.coeffs));
}

}  // namespace qgstorm
