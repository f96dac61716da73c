#pragma once

#include <utility>

#include "qgstorm/field.hpp"

namespace qgstorm {

// Sine-basis transforms between MxN coefficient space and an nx x ny interior
// collocation grid, realized with precomputed sine/cosine matrices. On
// interior nodes the discrete sine vectors are exactly orthogonal,
//
//   sum_i sin(m pi x_i) sin(m' pi x_i) = (nx+1)/2 * delta_{mm'},  m, m' <= nx,
//
// so analysis after synthesis is the identity to round-off, and the analysis
// of a quadratic product on a 3/2-padded grid is the exact Galerkin
// projection (no aliasing onto retained modes: 2(nx+1) > 3M).
class SineTransform {
  public:
    SineTransform(int modes_x, int modes_y, GridSpec grid);

    // Cached lookup; instances are immutable and per-thread.
    static const SineTransform& get(int modes_x, int modes_y, GridSpec grid);

    const GridSpec& grid() const { return grid_; }
    int modes_x() const { return mx_; }
    int modes_y() const { return my_; }

    Eigen::MatrixXd synthesize(const Eigen::MatrixXd& coeffs) const;
    Eigen::MatrixXd analyze(const Eigen::MatrixXd& values, int modes_x, int modes_y) const;
    Eigen::MatrixXd dx_grid(const Eigen::MatrixXd& coeffs) const;
    Eigen::MatrixXd dy_grid(const Eigen::MatrixXd& coeffs) const;

    // Galerkin projection of d/dx f onto the truncated sine basis via the grid.
    Eigen::MatrixXd project_dx(const Eigen::MatrixXd& coeffs) const;

    // J(psi, omega) = psi_x omega_y - psi_y omega_x evaluated pointwise on the
    // grid and analyzed back to the truncation of psi.
    Eigen::MatrixXd jacobian(const Eigen::MatrixXd& psi, const Eigen::MatrixXd& omega) const;

  private:
    int mx_, my_;
    GridSpec grid_;
    Eigen::MatrixXd sx_, sy_;  // sin(m pi x_i), sin(n pi y_j)
    Eigen::MatrixXd cx_, cy_;  // m pi cos(m pi x_i), n pi cos(n pi y_j)
};

// Operation-level wrappers.
PhysicalField to_physical(const SpectralField& f, GridSpec grid);
SpectralField to_spectral(const PhysicalField& p);                             // all grid modes
SpectralField to_spectral(const PhysicalField& p, int modes_x, int modes_y);   // truncated
std::pair<PhysicalField, PhysicalField> gradient(const SpectralField& f, GridSpec grid);
SpectralField jacobian(const SpectralField& psi, const SpectralField& omega, GridSpec grid);
SpectralField project_dx(const SpectralField& f, GridSpec grid);

}  // namespace qgstorm
