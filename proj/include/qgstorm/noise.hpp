#pragma once

#include <string>
#include <vector>

#include "qgstorm/field.hpp"
#include "qgstorm/rng.hpp"

namespace qgstorm {

// Coefficient law assigning mu_k >= 0 to each mode. Together with gamma and
// the canonical mode ordering this fully determines the Q-Wiener process
// W(t) = sum sqrt(mu_k) beta_k(t) phi_k.
enum class MuRule {
    power,     // mu_{mn} = (m^2+n^2)^{-s}
    band,      // mu_k = 1 for k <= band in the canonical ordering, else 0
    constant,  // mu_k = 1 for every mode (violates summability for gamma in (0,1))
};

struct NoiseSpec {
    double gamma = 0.5;  // must lie in (0,1)
    MuRule mu_rule = MuRule::power;
    double mu_exponent = 1.0;  // s for the power rule
    int mu_band = 10;          // band size for the band rule

    double mu(Mode mode, int modes_x, int modes_y) const;
    // All mu values of a truncation in one pass (cheap also for the band rule).
    Eigen::MatrixXd mu_matrix(int modes_x, int modes_y) const;
    void validate() const;
};

enum class SummabilityVerdict { converges, diverges, inconclusive };

struct SummabilityReport {
    SummabilityVerdict verdict = SummabilityVerdict::inconclusive;
    bool analytic = false;          // classified by the comparison test
    std::vector<double> partial_sums;  // trace at dyadic k
    std::vector<double> block_ratios;  // consecutive dyadic block-sum ratios
    std::string detail;
};

// Checks sum_k mu_k / |lambda_k|^{1-gamma} < infinity. Power-law rules are
// classified analytically (converges iff s + (1 - gamma) > 1, |lambda_k|
// growing linearly in k by 2D Weyl counting); band rules are finite sums;
// otherwise dyadic partial sums with a tail-ratio heuristic, and
// "inconclusive" is an allowed outcome.
SummabilityReport check_summability(const NoiseSpec& spec, double nu, int kmax);

// Per-mode state of the stochastic convolution W_A(t), advanced by the exact
// Ornstein-Uhlenbeck recursion
//   a <- e^{lambda h} a + eta,  eta ~ N(0, mu (1 - e^{2 lambda h}) / (2|lambda|)).
// Randomness is a pure function of (seed, trajectory, mode, step), so states
// are reproducible and safely parallel across trajectories.
struct ConvolutionState {
    SpectralField coeffs;
    double t = 0.0;
    uint64_t seed = 0;
    uint64_t trajectory = 0;
    uint64_t step = 0;  // counter feeding the keyed generator

    static ConvolutionState initial(int modes_x, int modes_y, uint64_t seed, uint64_t trajectory);
};

ConvolutionState ou_update(const ConvolutionState& state, double h, const NoiseSpec& spec,
                           double nu);

// Increment of the plain Q-Wiener process over a step of length h: mode (m,n)
// gets an independent centered Gaussian with variance mu_{mn} h.
SpectralField sample_wiener_increment(const NoiseSpec& spec, int modes_x, int modes_y, double h,
                                      uint64_t seed, uint64_t trajectory, uint64_t step);

// Observed hypothesis constants over a truncation: sup|phi_k| and the uniform
// gradient ratio max(sup|dx phi_k|, sup|dy phi_k|) / sqrt(|lambda_k|). The
// ratio is bounded by 2/sqrt(nu); on the diagonal family m = n it equals
// sqrt(2)/sqrt(nu) exactly.
struct EigenfunctionBounds {
    double c_sup = 0.0;
    double c_grad_ratio = 0.0;
    double c_grad_ratio_diagonal = 0.0;
    bool sup_ok = false;   // c_sup == 2 within round-off
    bool grad_ok = false;  // c_grad_ratio <= 2/sqrt(nu)
};

EigenfunctionBounds eigenfunction_bounds_check(int modes_x, int modes_y, double nu = 1.0);

// Monte Carlo estimate of kappa(D) = inf meas(D cap B(x,y;rho)) / rho^2 over a
// grid of radii in (0, sqrt 2) and centers in the closed square. Positive for
// the unit square; the exact infimum is 1/2 (approached as rho -> diam D).
struct KappaEstimate {
    double kappa = 0.0;
    double argmin_rho = 0.0;
    double argmin_cx = 0.0, argmin_cy = 0.0;
};

std::vector<double> kappa_rho_grid(int rho_grid);
std::vector<std::pair<double, double>> kappa_center_grid();
KappaEstimate kappa_estimate(long samples_per_cell, int rho_grid, uint64_t seed = 2026);

}  // namespace qgstorm
