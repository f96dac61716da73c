#pragma once

#include <vector>

namespace qgstorm {

// Sine-basis index pair on the unit square; m, n >= 1.
struct Mode {
    int m = 1;
    int n = 1;

    friend bool operator==(const Mode&, const Mode&) = default;
};

// Eigenvalue of nu*Laplacian at phi_{mn}: -nu (m^2 + n^2) pi^2. Throws on nu <= 0.
double eigenvalue(Mode mode, double nu);

// Normalized eigenfunction phi_{mn}(x,y) = 2 sin(m pi x) sin(n pi y).
// L2-normalization constant is exactly 2. Throws if (x,y) leaves [0,1]^2.
double basis_eval(Mode mode, double x, double y);
double basis_dx(Mode mode, double x, double y);
double basis_dy(Mode mode, double x, double y);

// Canonical enumeration of the 2D modes of an MxN truncation into k = 1,2,...:
// sorted by m^2+n^2 ascending, ties by m ascending.
std::vector<Mode> ordered_modes(int modes_x, int modes_y);

}  // namespace qgstorm
