#include <doctest.h>

#include <numbers>
#include <set>

#include "qgstorm/transform.hpp"
#include "test_util.hpp"

using namespace qgstorm;
namespace t = qgstorm::test;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("eigenvalue formula") {
    CHECK(eigenvalue(Mode{1, 1}, 1.0) == doctest::Approx(-2.0 * kPi2).epsilon(1e-14));
    CHECK(eigenvalue(Mode{1, 1}, 0.5) == doctest::Approx(-kPi2).epsilon(1e-14));
    CHECK(eigenvalue(Mode{2, 3}, 1.0) == doctest::Approx(-13.0 * kPi2).epsilon(1e-14));
    CHECK_THROWS_AS(eigenvalue(Mode{1, 1}, 0.0), std::domain_error);
    CHECK_THROWS_AS(eigenvalue(Mode{1, 1}, -1.0), std::domain_error);
    CHECK_THROWS_AS(eigenvalue(Mode{0, 1}, 1.0), std::domain_error);
}

TEST_CASE("basis evaluation") {
    CHECK(basis_eval(Mode{1, 1}, 0.5, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(basis_eval(Mode{1, 1}, 0.0, 0.3) == doctest::Approx(0.0));
    CHECK_THROWS_AS(basis_eval(Mode{1, 1}, -0.1, 0.5), std::domain_error);
    CHECK_THROWS_AS(basis_eval(Mode{1, 1}, 0.5, 1.2), std::domain_error);

    // L2 normalization against the quadrature oracle
    for (Mode mode : {Mode{1, 1}, Mode{2, 3}, Mode{5, 1}}) {
        const double l2sq = t::simpson2d(
            [mode](double x, double y) {
                const double v = basis_eval(mode, x, y);
                return v * v;
            },
            400);
        CHECK(l2sq == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("transform round trips") {
    SUBCASE("single mode") {
        const auto f = SpectralField::single(Mode{1, 1}, 4, 4);
        const auto back = to_spectral(to_physical(f, GridSpec{8, 8}), 4, 4);
        CHECK((back.coeffs - f.coeffs).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("zero field") {
        const auto f = SpectralField::zero(6, 6);
        CHECK(to_physical(f, GridSpec{9, 9}).values.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("random 8x8 on 16x16 grid vs direct summation") {
        const auto f = t::random_field(8, 8, 11);
        const GridSpec g{16, 16};
        const auto p = to_physical(f, g);
        for (int i = 0; i < g.nx; i += 3)
            for (int j = 0; j < g.ny; j += 3)
                CHECK(p.values(i, j) ==
                      doctest::Approx(t::direct_eval(f, g.x(i), g.y(j))).epsilon(1e-12));
        const auto back = to_spectral(p, 8, 8);
        CHECK((back.coeffs - f.coeffs).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("64x64 truncation") {
        const auto f = t::random_field(64, 64, 5);
        const auto back = to_spectral(to_physical(f, GridSpec{96, 96}), 64, 64);
        CHECK((back.coeffs - f.coeffs).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("grid coarser than truncation rejected") {
        const auto f = t::random_field(8, 8, 1);
        CHECK_THROWS_AS(to_physical(f, GridSpec{6, 8}), std::domain_error);
    }
}

TEST_CASE("laplacian pair") {
    const auto w = SpectralField::single(Mode{1, 1}, 4, 4);
    const auto psi = invert_laplacian(w);
    CHECK(psi.at(Mode{1, 1}) == doctest::Approx(-1.0 / (2.0 * kPi2)).epsilon(1e-14));

    const auto f = t::random_field(12, 12, 3);
    const auto round = laplacian(invert_laplacian(f));
    CHECK((round.coeffs - f.coeffs).cwiseAbs().maxCoeff() <= 1e-13);

    const auto lap = laplacian(SpectralField::single(Mode{2, 3}, 4, 4));
    CHECK(lap.at(Mode{2, 3}) == doctest::Approx(-13.0 * kPi2).epsilon(1e-14));
}

TEST_CASE("gradient") {
    CHECK(basis_dx(Mode{1, 1}, 0.5, 0.5) == doctest::Approx(0.0));
    CHECK(basis_dx(Mode{1, 1}, 0.0, 0.5) == doctest::Approx(2.0 * kPi).epsilon(1e-14));

    // grid values against pointwise evaluation
    const auto f = t::random_field(6, 6, 9);
    const GridSpec g{13, 13};
    const auto [fx, fy] = gradient(f, g);
    double vx = 0.0, vy = 0.0;
    for (int i = 0; i < f.modes_x(); ++i)
        for (int j = 0; j < f.modes_y(); ++j) {
            vx += f.coeffs(i, j) * basis_dx(Mode{i + 1, j + 1}, g.x(4), g.y(7));
            vy += f.coeffs(i, j) * basis_dy(Mode{i + 1, j + 1}, g.x(4), g.y(7));
        }
    CHECK(fx.values(4, 7) == doctest::Approx(vx).epsilon(1e-12));
    CHECK(fy.values(4, 7) == doctest::Approx(vy).epsilon(1e-12));

    // ||grad phi_11||^2 = 2 pi^2 by the quadrature oracle and the eigenrelation
    const double grad_sq = t::simpson2d(
        [](double x, double y) {
            const double gx = basis_dx(Mode{1, 1}, x, y);
            const double gy = basis_dy(Mode{1, 1}, x, y);
            return gx * gx + gy * gy;
        },
        400);
    CHECK(grad_sq == doctest::Approx(2.0 * kPi2).epsilon(1e-8));
}

TEST_CASE("jacobian oracle phi11 x phi12") {
    // Symbolic expansion: J(phi_11, phi_12) = (pi^2/2) phi_23 - (3 pi^2/2) phi_21.
    // Cross-checked here against direct quadrature of <J, phi_mn>.
    const Mode m23{2, 3}, m21{2, 1};
    auto j_point = [](double x, double y) {
        return basis_dx(Mode{1, 1}, x, y) * basis_dy(Mode{1, 2}, x, y) -
               basis_dy(Mode{1, 1}, x, y) * basis_dx(Mode{1, 2}, x, y);
    };
    const double c23 = t::simpson2d(
        [&](double x, double y) { return j_point(x, y) * basis_eval(m23, x, y); }, 400);
    const double c21 = t::simpson2d(
        [&](double x, double y) { return j_point(x, y) * basis_eval(m21, x, y); }, 400);
    CHECK(c23 == doctest::Approx(kPi2 / 2.0).epsilon(1e-8));
    CHECK(c21 == doctest::Approx(-3.0 * kPi2 / 2.0).epsilon(1e-8));

    const auto psi = SpectralField::single(Mode{1, 1}, 8, 8);
    const auto omg = SpectralField::single(Mode{1, 2}, 8, 8);
    const auto j = jacobian(psi, omg, GridSpec::dealiased(8, 8));
    CHECK(j.at(m23) == doctest::Approx(kPi2 / 2.0).epsilon(1e-12));
    CHECK(j.at(m21) == doctest::Approx(-3.0 * kPi2 / 2.0).epsilon(1e-12));
    double rest = 0.0;
    for (int i = 0; i < 8; ++i)
        for (int jj = 0; jj < 8; ++jj)
            if (!(Mode{i + 1, jj + 1} == m23) && !(Mode{i + 1, jj + 1} == m21))
                rest = std::max(rest, std::abs(j.coeffs(i, jj)));
    CHECK(rest <= 1e-12);
}

TEST_CASE("jacobian structure") {
    const GridSpec g = GridSpec::dealiased(10, 10);
    const auto f = t::random_field(10, 10, 21);
    const auto cf = SpectralField(3.7 * f.coeffs);

    CHECK(norms(jacobian(f, f, g)).l2 == 0.0);  // pointwise cancellation is exact
    CHECK(norms(jacobian(f, cf, g)).l2 <= 1e-12);

    const auto gfield = t::random_field(10, 10, 22);
    const auto jfg = jacobian(f, gfield, g);
    const auto jgf = jacobian(gfield, f, g);
    CHECK((jfg.coeffs + jgf.coeffs).cwiseAbs().maxCoeff() == 0.0);  // bitwise antisymmetry
}

TEST_CASE("jacobian requires a dealiased grid") {
    const auto f = t::random_field(8, 8, 1);
    const auto g = t::random_field(8, 8, 2);
    CHECK_THROWS_AS(jacobian(f, g, GridSpec{8, 8}), std::domain_error);
    CHECK_NOTHROW(jacobian(f, g, GridSpec::dealiased(8, 8)));
}

TEST_CASE("mode ordering enumerates the truncation exactly once") {
    const auto modes = ordered_modes(7, 5);
    CHECK(modes.size() == 35);
    long prev = 0;
    std::set<std::pair<int, int>> seen;
    for (const Mode m : modes) {
        const long k2 = long(m.m) * m.m + long(m.n) * m.n;
        CHECK(k2 >= prev);
        prev = k2;
        CHECK(seen.insert({m.m, m.n}).second);
        CHECK(m.m >= 1);
        CHECK(m.m <= 7);
        CHECK(m.n >= 1);
        CHECK(m.n <= 5);
    }
}

TEST_CASE("jacobian orthogonality invariant") {
    const GridSpec g = GridSpec::dealiased(16, 16);
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto psi = t::random_field(16, 16, 100 + seed);
        const auto omg = t::random_field(16, 16, 200 + seed);
        const auto j = jacobian(psi, omg, g);
        const double scale = norms(laplacian(psi)).l2;
        const double l2o = norms(omg).l2;
        CHECK(std::abs(dot(j, omg)) <= 1e-9 * scale * l2o * l2o);
        CHECK(std::abs(dot(j, psi)) <= 1e-9 * scale * l2o * norms(psi).l2);
    }
}

TEST_CASE("norms of phi11") {
    const auto f = SpectralField::single(Mode{1, 1}, 4, 4);
    const Norms n = norms(f);
    CHECK(n.l2 == doctest::Approx(1.0));
    CHECK(n.h1_semi == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(n.sup_estimate == doctest::Approx(2.0));
    CHECK(basis_eval(Mode{1, 1}, 0.5, 0.5) == doctest::Approx(n.sup_estimate));  // bound attained
}

TEST_CASE("parseval invariant") {
    for (unsigned seed = 0; seed < 5; ++seed) {
        const auto f = t::random_field(24, 24, 300 + seed, 2.5);
        const auto p = to_physical(f, GridSpec::dealiased(24, 24));
        CHECK(grid_l2(p) == doctest::Approx(norms(f).l2).epsilon(1e-8));
    }
}

TEST_CASE("spectral elliptic identity") {
    // ||d_xy f||^2 <= 1/4 ||Lap f||^2, exact in coefficients since
    // m n <= (m^2+n^2)/2.
    double worst = 0.0;
    for (unsigned seed = 0; seed < 8; ++seed) {
        const auto f = t::random_field(20, 20, 400 + seed, 1.0, 0.01);
        double mixed = 0.0, lap = 0.0;
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                const double m = i + 1, n = j + 1;
                const double c2 = f.coeffs(i, j) * f.coeffs(i, j);
                mixed += m * m * n * n * kPi2 * kPi2 * c2;
                lap += (m * m + n * n) * (m * m + n * n) * kPi2 * kPi2 * c2;
            }
        worst = std::max(worst, mixed / lap);
    }
    CHECK(worst <= 0.25 + 1e-12);
}

TEST_SUITE_END();
