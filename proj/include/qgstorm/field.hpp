#pragma once

#include <Eigen/Dense>

#include "qgstorm/mode.hpp"

namespace qgstorm {

// Interior collocation grid on (0,1)^2: nx x ny nodes at x_i = (i+1)/(nx+1),
// y_j = (j+1)/(ny+1). Implied boundary values are zero (Dirichlet).
struct GridSpec {
    int nx = 48;
    int ny = 48;
    double dealias_factor = 1.5;

    double x(int i) const { return double(i + 1) / (nx + 1); }
    double y(int j) const { return double(j + 1) / (ny + 1); }
    // quadrature weight of one interior node (closed trapezoid with zero boundary)
    double weight() const { return 1.0 / (double(nx + 1) * double(ny + 1)); }

    // Smallest grid that dealiases quadratic products of an MxN truncation.
    static GridSpec dealiased(int modes_x, int modes_y, double factor = 1.5);
    bool conforms(int modes_x, int modes_y) const { return nx >= modes_x && ny >= modes_y; }
};

// Coefficients of a scalar field in the orthonormal basis phi_{mn};
// coeffs(m-1, n-1) multiplies phi_{mn}. By Parseval the L2 norm of the field
// equals the Frobenius norm of coeffs.
struct SpectralField {
    Eigen::MatrixXd coeffs;

    SpectralField() = default;
    explicit SpectralField(Eigen::MatrixXd c) : coeffs(std::move(c)) {}
    static SpectralField zero(int modes_x, int modes_y) {
        return SpectralField(Eigen::MatrixXd::Zero(modes_x, modes_y));
    }
    static SpectralField single(Mode mode, int modes_x, int modes_y, double amplitude = 1.0);

    int modes_x() const { return int(coeffs.rows()); }
    int modes_y() const { return int(coeffs.cols()); }
    double& at(Mode mode) { return coeffs(mode.m - 1, mode.n - 1); }
    double at(Mode mode) const { return coeffs(mode.m - 1, mode.n - 1); }
};

// Point values on an interior collocation grid.
struct PhysicalField {
    Eigen::MatrixXd values;  // values(i,j) at (grid.x(i), grid.y(j))
    GridSpec grid;
};

struct Norms {
    double l2 = 0.0;        // coefficient (= L2) norm
    double h1_semi = 0.0;   // sqrt(sum (m^2+n^2) pi^2 c^2) = ||grad f||_2
    double sup_estimate = 0.0;  // sum 2|c|, rigorous sup bound via |phi| <= 2
};

Norms norms(const SpectralField& f);

// Coefficient-wise multiply / divide by -(m^2+n^2) pi^2. Boundedly invertible
// on the truncated basis (no zero eigenvalue).
SpectralField laplacian(const SpectralField& f);
SpectralField invert_laplacian(const SpectralField& w);

// L2 inner product of two fields with the same truncation.
double dot(const SpectralField& a, const SpectralField& b);

// Discrete L2 inner product / norm on the grid (trapezoid with zero boundary).
double grid_dot(const PhysicalField& a, const PhysicalField& b);
double grid_l2(const PhysicalField& a);

}  // namespace qgstorm
