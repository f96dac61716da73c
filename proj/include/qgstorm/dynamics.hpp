#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgstorm/noise.hpp"
#include "qgstorm/transform.hpp"

namespace qgstorm {

// Physical constants and discretization of the vorticity equation
//   d omega = (nu Lap omega - r omega - beta psi_x - J(psi, omega)) dt + dW,
// with omega = Lap psi and zero Dirichlet conditions on the unit square.
struct ModelParams {
    double nu = 1e-2;   // viscous dissipation, > 0
    double r = 0.1;     // Ekman dissipation, >= 0 (r = 0 allowed for testing only)
    double beta = 1.0;  // Coriolis gradient, >= 0
    int modes_x = 32;
    int modes_y = 32;
    double dealias_factor = 1.5;

    GridSpec grid() const { return GridSpec::dealiased(modes_x, modes_y, dealias_factor); }
    // r > 0 is part of the model hypotheses; runs with r = 0 are flagged.
    bool physical() const { return r > 0.0; }
    void validate() const;
};

enum class Scheme { mild_em, split };

struct BlowupError : std::runtime_error {
    BlowupError(double t, double value)
        : std::runtime_error("blow-up guard tripped at t = " + std::to_string(t) +
                             " (l2 = " + std::to_string(value) + ")"),
          t(t),
          value(value) {}
    double t;
    double value;
};

// omega, the stochastic-convolution state, and the clock. In split mode the
// integrator advances U = omega - W_A and reconstructs omega = U + W_A, so the
// reported omega always satisfies that identity exactly.
struct SolverState {
    SpectralField omega;
    ConvolutionState wa;
    double t = 0.0;
    Scheme scheme = Scheme::mild_em;

    SpectralField split_variable() const {  // U = omega - W_A
        return SpectralField(omega.coeffs - wa.coeffs.coeffs);
    }
    static SolverState initial(const SpectralField& omega0, Scheme scheme, uint64_t seed,
                               uint64_t trajectory);
};

// Drift operator F(omega) = -r omega - beta psi_x - J(psi, omega) with
// psi = invert_laplacian(omega); the beta term and the Jacobian are evaluated
// on the dealiased grid and projected back.
SpectralField drift(const SpectralField& omega, const ModelParams& p);

// Exponential integrator core. The linear flow exp((lambda - r) h) is applied
// exactly per mode and only G = -beta psi_x - J (plus -r W_A in split form) is
// frozen over the step; stochastic increments are the exact convolution
// increments, folded from `substeps` draws on a finer noise grid so that
// trajectories with nested steps share one noise path.
class Integrator {
  public:
    Integrator(const ModelParams& p, const NoiseSpec& spec, double h, int substeps = 1,
               bool jacobian_enabled = true, double blowup_cap = 1e8);

    void step(SolverState& state) const;
    double step_size() const { return h_; }
    const ModelParams& params() const { return p_; }

  private:
    SpectralField frozen_term(const SpectralField& omega) const;  // -beta psi_x - J
    void check_finite(const SolverState& state) const;

    ModelParams p_;
    NoiseSpec spec_;
    double h_;
    int substeps_;
    bool jac_on_;
    double cap_;
    Eigen::ArrayXXd decay_lin_;     // exp((lambda - r) h)
    Eigen::ArrayXXd phi1h_;         // h phi1((lambda - r) h)
    Eigen::ArrayXXd decay_lin_f_;   // per noise substep, rate lambda - r
    Eigen::ArrayXXd sigma_lin_f_;
    Eigen::ArrayXXd decay_wa_;      // exp(lambda h)
    Eigen::ArrayXXd decay_wa_f_;    // per noise substep, rate lambda
    Eigen::ArrayXXd sigma_wa_f_;
    bool has_noise_;
};

// One step of the exponential Euler-Maruyama scheme on the mild form /
// of the deterministic-split scheme. Convenience wrappers over Integrator.
SolverState step_mild_em(const SolverState& state, double h, const ModelParams& p,
                         const NoiseSpec& spec);
SolverState step_split(const SolverState& state, double h, const ModelParams& p,
                       const NoiseSpec& spec);

// Closed-form single-mode solution of the unforced linear problem (beta = 0):
// omega(t) = exp((lambda_mn - r) t) phi_mn. Exact because J(psi, omega) = 0
// when psi is proportional to omega. Rejects beta != 0.
SpectralField exact_linear_solution(Mode mode, const ModelParams& p, double t);

struct SimOptions {
    int record_stride = 10;
    double blowup_cap = 1e8;
    bool jacobian_enabled = true;  // test hook; disabling is non-physical
    int noise_substeps = 1;
    bool keep_fields = false;  // store U and W_A coefficients at record times
    int snapshot_stride = 0;   // 0 disables snapshots
    std::function<void(double, const SpectralField&)> snapshot_sink;
};

struct TrajectoryRecord {
    std::vector<double> t, l2, h1, sup_est, drift_l2;
    std::vector<double> u_l2, wa_sup;  // split-variable norm and W_A sup bound
    std::vector<Eigen::MatrixXd> u_fields, wa_fields;
    bool aborted = false;
    std::string abort_reason;
    double h = 0.0;
    Scheme scheme = Scheme::mild_em;
    uint64_t seed = 0, trajectory = 0;
    bool physical = true;
    bool jacobian_enabled = true;

    size_t size() const { return t.size(); }
};

// Full trajectory on [0, n h], n = round(T/h), recorded every
// opts.record_stride steps and at the final time. Deterministic given
// (params, spec, seed, trajectory). On blow-up the partial record is returned
// with the abort flag set.
TrajectoryRecord simulate(const ModelParams& p, const NoiseSpec& spec,
                          const SpectralField& omega0, double T, double h, Scheme scheme,
                          const SimOptions& opts = {}, uint64_t seed = 0,
                          uint64_t trajectory = 0);

}  // namespace qgstorm
