#include "qgstorm/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qgstorm {

namespace {
// OU increment standard deviation over a step h for rate lambda < 0.
double ou_sigma(double mu, double lambda, double h) {
    if (mu <= 0.0) return 0.0;
    return std::sqrt(mu * (-std::expm1(2.0 * lambda * h)) / (2.0 * std::abs(lambda)));
}
}  // namespace

void NoiseSpec::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("gamma must lie in (0,1)");
    if (mu_rule == MuRule::band && mu_band < 0)
        throw std::domain_error("mu_band must be nonnegative");
}

double NoiseSpec::mu(Mode mode, int modes_x, int modes_y) const {
    switch (mu_rule) {
        case MuRule::power: {
            const double k2 = double(mode.m) * mode.m + double(mode.n) * mode.n;
            return std::pow(k2, -mu_exponent);
        }
        case MuRule::band:
            return mu_matrix(modes_x, modes_y)(mode.m - 1, mode.n - 1);
        case MuRule::constant:
            return 1.0;
    }
    return 0.0;
}

Eigen::MatrixXd NoiseSpec::mu_matrix(int modes_x, int modes_y) const {
    Eigen::MatrixXd mu(modes_x, modes_y);
    if (mu_rule == MuRule::band) {
        mu.setZero();
        const auto modes = ordered_modes(modes_x, modes_y);
        for (int k = 0; k < int(modes.size()) && k < mu_band; ++k)
            mu(modes[size_t(k)].m - 1, modes[size_t(k)].n - 1) = 1.0;
        return mu;
    }
    for (int i = 0; i < modes_x; ++i)
        for (int j = 0; j < modes_y; ++j)
            mu(i, j) = this->mu(Mode{i + 1, j + 1}, modes_x, modes_y);
    return mu;
}

SummabilityReport check_summability(const NoiseSpec& spec, double nu, int kmax) {
    spec.validate();
    if (!(nu > 0.0)) throw std::domain_error("check_summability: nu must be positive");
    if (kmax < 100) throw std::domain_error("check_summability: kmax must be at least 100");

    SummabilityReport rep;
    if (spec.mu_rule == MuRule::power) {
        // terms ~ (m^2+n^2)^{-(s+1-gamma)}; the 2D lattice sum converges iff
        // the exponent exceeds 1, i.e. s + (1-gamma) > 1.
        rep.analytic = true;
        const double p = spec.mu_exponent + 1.0 - spec.gamma;
        rep.verdict = p > 1.0 ? SummabilityVerdict::converges : SummabilityVerdict::diverges;
        rep.detail = "comparison test: s + (1-gamma) = " + std::to_string(p) +
                     (p > 1.0 ? " > 1" : " <= 1");
    } else if (spec.mu_rule == MuRule::band) {
        rep.analytic = true;
        rep.verdict = SummabilityVerdict::converges;
        rep.detail = "finite sum (band rule)";
    }

    // Partial sums over the canonical ordering, also used as the numeric
    // fallback for rules without an analytic classification.
    const int side = std::max(4, int(std::ceil(std::sqrt(double(kmax)))) + 2);
    auto modes = ordered_modes(side, side);
    double sum = 0.0;
    double block = 0.0;
    double prev_block = -1.0;
    long next_dyadic = 1;
    const long limit = std::min<long>(kmax, long(modes.size()));
    for (long k = 0; k < limit; ++k) {
        const Mode mode = modes[size_t(k)];
        const double lambda = std::abs(eigenvalue(mode, nu));
        double mu;
        switch (spec.mu_rule) {
            case MuRule::power:
                mu = std::pow(double(mode.m) * mode.m + double(mode.n) * mode.n,
                              -spec.mu_exponent);
                break;
            case MuRule::band:
                mu = k < spec.mu_band ? 1.0 : 0.0;
                break;
            default:
                mu = 1.0;
        }
        const double term = mu * std::pow(lambda, -(1.0 - spec.gamma));
        sum += term;
        block += term;
        if (k + 1 == next_dyadic) {
            rep.partial_sums.push_back(sum);
            if (prev_block > 0.0) rep.block_ratios.push_back(block / prev_block);
            prev_block = block > 0.0 ? block : prev_block;
            block = 0.0;
            next_dyadic *= 2;
        }
    }

    if (!rep.analytic) {
        // Dyadic tail-ratio heuristic: geometric decay of block sums means
        // convergence, nondecreasing block sums divergence.
        const int nb = int(rep.block_ratios.size());
        if (nb < 3) {
            rep.verdict = SummabilityVerdict::inconclusive;
            rep.detail = "too few dyadic blocks";
            return rep;
        }
        double lo = rep.block_ratios[size_t(nb - 3)], hi = lo;
        for (int i = nb - 3; i < nb; ++i) {
            lo = std::min(lo, rep.block_ratios[size_t(i)]);
            hi = std::max(hi, rep.block_ratios[size_t(i)]);
        }
        if (hi <= 0.95) {
            rep.verdict = SummabilityVerdict::converges;
            rep.detail = "dyadic block sums decay geometrically";
        } else if (lo >= 1.0) {
            rep.verdict = SummabilityVerdict::diverges;
            rep.detail = "dyadic block sums do not decay";
        } else {
            rep.verdict = SummabilityVerdict::inconclusive;
            rep.detail = "tail ratio near 1";
        }
    }
    return rep;
}

ConvolutionState ConvolutionState::initial(int modes_x, int modes_y, uint64_t seed,
                                           uint64_t trajectory) {
    ConvolutionState st;
    st.coeffs = SpectralField::zero(modes_x, modes_y);
    st.seed = seed;
    st.trajectory = trajectory;
    return st;
}

ConvolutionState ou_update(const ConvolutionState& state, double h, const NoiseSpec& spec,
                           double nu) {
    if (!(h > 0.0)) throw std::domain_error("ou_update: h must be positive");
    spec.validate();
    ConvolutionState out = state;
    const uint64_t stream = rng::stream_key(state.seed, state.trajectory);
    const int mx = state.coeffs.modes_x(), my = state.coeffs.modes_y();
    const Eigen::MatrixXd mu = spec.mu_matrix(mx, my);
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j) {
            const Mode mode{i + 1, j + 1};
            const double lambda = eigenvalue(mode, nu);
            const double decay = std::exp(lambda * h);
            double a = decay * state.coeffs.coeffs(i, j);
            const double sigma = ou_sigma(mu(i, j), lambda, h);
            if (sigma > 0.0)
                a += sigma * rng::normal(stream, uint32_t(mode.m), uint32_t(mode.n), state.step,
                                         rng::Tag::convolution);
            out.coeffs.coeffs(i, j) = a;
        }
    out.t = state.t + h;
    out.step = state.step + 1;
    return out;
}

SpectralField sample_wiener_increment(const NoiseSpec& spec, int modes_x, int modes_y, double h,
                                      uint64_t seed, uint64_t trajectory, uint64_t step) {
    if (!(h > 0.0)) throw std::domain_error("sample_wiener_increment: h must be positive");
    spec.validate();
    SpectralField dw = SpectralField::zero(modes_x, modes_y);
    const uint64_t stream = rng::stream_key(seed, trajectory);
    const Eigen::MatrixXd mu = spec.mu_matrix(modes_x, modes_y);
    for (int i = 0; i < modes_x; ++i)
        for (int j = 0; j < modes_y; ++j) {
            if (mu(i, j) > 0.0)
                dw.coeffs(i, j) = std::sqrt(mu(i, j) * h) *
                                  rng::normal(stream, uint32_t(i + 1), uint32_t(j + 1), step,
                                              rng::Tag::wiener);
        }
    return dw;
}

EigenfunctionBounds eigenfunction_bounds_check(int modes_x, int modes_y, double nu) {
    if (!(nu > 0.0)) throw std::domain_error("eigenfunction_bounds_check: nu must be positive");
    EigenfunctionBounds out;
    for (int m = 1; m <= modes_x; ++m)
        for (int n = 1; n <= modes_y; ++n) {
            const Mode mode{m, n};
            // |phi| is maximal on the lattice of factor extrema x = (2i+1)/2m,
            // y = (2j+1)/2n; the gradient components on x = i/m (resp. y = j/n)
            // crossed with the other factor's extrema.
            double sup = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j)
                    sup = std::max(sup, std::abs(basis_eval(mode, (2.0 * i + 1.0) / (2.0 * m),
                                                            (2.0 * j + 1.0) / (2.0 * n))));
            double gx = 0.0;
            for (int i = 0; i <= m; ++i)
                for (int j = 0; j < n; ++j)
                    gx = std::max(gx, std::abs(basis_dx(mode, double(i) / m,
                                                        (2.0 * j + 1.0) / (2.0 * n))));
            double gy = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j <= n; ++j)
                    gy = std::max(gy, std::abs(basis_dy(mode, (2.0 * i + 1.0) / (2.0 * m),
                                                        double(j) / n)));
            const double ratio = std::max(gx, gy) / std::sqrt(std::abs(eigenvalue(mode, nu)));
            out.c_sup = std::max(out.c_sup, sup);
            out.c_grad_ratio = std::max(out.c_grad_ratio, ratio);
            if (m == n) out.c_grad_ratio_diagonal = std::max(out.c_grad_ratio_diagonal, ratio);
        }
    out.sup_ok = std::abs(out.c_sup - 2.0) <= 1e-12;
    out.grad_ok = out.c_grad_ratio <= 2.0 / std::sqrt(nu) + 1e-12;
    return out;
}

std::vector<double> kappa_rho_grid(int rho_grid) {
    if (rho_grid < 1) throw std::domain_error("kappa: rho_grid must be positive");
    std::vector<double> rhos(static_cast<size_t>(rho_grid));
    const double diam = std::sqrt(2.0);
    for (int i = 0; i < rho_grid; ++i) rhos[size_t(i)] = diam * double(i + 1) / double(rho_grid + 1);
    return rhos;
}

std::vector<std::pair<double, double>> kappa_center_grid() {
    std::vector<std::pair<double, double>> centers;
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) centers.emplace_back(i / 8.0, j / 8.0);
    return centers;
}

KappaEstimate kappa_estimate(long samples_per_cell, int rho_grid, uint64_t seed) {
    if (samples_per_cell < 10000)
        throw std::domain_error("kappa_estimate: at least 1e4 samples per cell required");
    const auto rhos = kappa_rho_grid(rho_grid);
    const auto centers = kappa_center_grid();
    const uint64_t stream = rng::stream_key(seed, 0);

    KappaEstimate best;
    best.kappa = std::numeric_limits<double>::infinity();
    for (size_t ri = 0; ri < rhos.size(); ++ri) {
        const double rho = rhos[ri];
        for (size_t ci = 0; ci < centers.size(); ++ci) {
            const auto [cx, cy] = centers[ci];
            // Sample uniformly in the bounding rectangle of disk-and-square;
            // area = rect_area * P(point in disk and in square).
            const double x0 = std::max(0.0, cx - rho), x1 = std::min(1.0, cx + rho);
            const double y0 = std::max(0.0, cy - rho), y1 = std::min(1.0, cy + rho);
            const double rect = (x1 - x0) * (y1 - y0);
            long hits = 0;
            for (long s = 0; s < samples_per_cell; ++s) {
                double u, v;
                rng::uniform2(stream, uint32_t(ri), uint32_t(ci), uint64_t(s), rng::Tag::kappa, u,
                              v);
                const double px = x0 + (x1 - x0) * u;
                const double py = y0 + (y1 - y0) * v;
                const double dx = px - cx, dy = py - cy;
                if (dx * dx + dy * dy <= rho * rho) ++hits;
            }
            const double ratio = rect * double(hits) / double(samples_per_cell) / (rho * rho);
            if (ratio < best.kappa) {
                best.kappa = ratio;
                best.argmin_rho = rho;
                best.argmin_cx = cx;
                best.argmin_cy = cy;
            }
        }
    }
    if (!(best.kappa > 0.0)) throw std::runtime_error("kappa estimate not positive");
    return best;
}

}  // namespace qgstorm
