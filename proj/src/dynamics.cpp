#include "qgstorm/dynamics.hpp"

#include <cmath>

namespace qgstorm {

namespace {

double phi1(double z) {
    if (std::abs(z) < 1e-8) return 1.0 + 0.5 * z;
    return std::expm1(z) / z;
}

double ou_sigma(double mu, double rate, double h) {
    if (mu <= 0.0) return 0.0;
    return std::sqrt(mu * (-std::expm1(2.0 * rate * h)) / (2.0 * std::abs(rate)));
}

}  // namespace

void ModelParams::validate() const {
    if (!(nu > 0.0)) throw std::domain_error("ModelParams: nu must be positive");
    if (r < 0.0) throw std::domain_error("ModelParams: r must be nonnegative");
    if (beta < 0.0) throw std::domain_error("ModelParams: beta must be nonnegative");
    if (modes_x < 1 || modes_y < 1) throw std::domain_error("ModelParams: empty truncation");
}

SolverState SolverState::initial(const SpectralField& omega0, Scheme scheme, uint64_t seed,
                                 uint64_t trajectory) {
    SolverState st;
    st.omega = omega0;
    st.wa = ConvolutionState::initial(omega0.modes_x(), omega0.modes_y(), seed, trajectory);
    st.scheme = scheme;
    return st;
}

SpectralField drift(const SpectralField& omega, const ModelParams& p) {
    p.validate();
    const GridSpec grid = p.grid();
    const SpectralField psi = invert_laplacian(omega);
    Eigen::MatrixXd out = -p.r * omega.coeffs;
    if (p.beta != 0.0) out -= p.beta * project_dx(psi, grid).coeffs;
    out -= jacobian(psi, omega, grid).coeffs;
    return SpectralField(std::move(out));
}

Integrator::Integrator(const ModelParams& p, const NoiseSpec& spec, double h, int substeps,
                       bool jacobian_enabled, double blowup_cap)
    : p_(p), spec_(spec), h_(h), substeps_(substeps), jac_on_(jacobian_enabled), cap_(blowup_cap) {
    p.validate();
    spec.validate();
    if (!(h > 0.0)) throw std::domain_error("Integrator: h must be positive");
    if (substeps < 1) throw std::domain_error("Integrator: substeps must be >= 1");

    const int mx = p.modes_x, my = p.modes_y;
    const double hf = h / substeps;
    decay_lin_.resize(mx, my);
    phi1h_.resize(mx, my);
    decay_lin_f_.resize(mx, my);
    sigma_lin_f_.resize(mx, my);
    decay_wa_.resize(mx, my);
    decay_wa_f_.resize(mx, my);
    sigma_wa_f_.resize(mx, my);
    const Eigen::MatrixXd mu = spec.mu_matrix(mx, my);
    has_noise_ = false;
    for (int i = 0; i < mx; ++i)
        for (int j = 0; j < my; ++j) {
            const double lambda = eigenvalue(Mode{i + 1, j + 1}, p.nu);
            const double shifted = lambda - p.r;
            decay_lin_(i, j) = std::exp(shifted * h);
            phi1h_(i, j) = h * phi1(shifted * h);
            decay_lin_f_(i, j) = std::exp(shifted * hf);
            decay_wa_(i, j) = std::exp(lambda * h);
            decay_wa_f_(i, j) = std::exp(lambda * hf);
            sigma_lin_f_(i, j) = ou_sigma(mu(i, j), shifted, hf);
            sigma_wa_f_(i, j) = ou_sigma(mu(i, j), lambda, hf);
            if (mu(i, j) > 0.0) has_noise_ = true;
        }
}

SpectralField Integrator::frozen_term(const SpectralField& omega) const {
    const GridSpec grid = p_.grid();
    const SpectralField psi = invert_laplacian(omega);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(omega.modes_x(), omega.modes_y());
    if (p_.beta != 0.0) g -= p_.beta * project_dx(psi, grid).coeffs;
    if (jac_on_) g -= jacobian(psi, omega, grid).coeffs;
    return SpectralField(std::move(g));
}

void Integrator::check_finite(const SolverState& state) const {
    const double l2 = state.omega.coeffs.norm();
    if (!std::isfinite(l2) || l2 > cap_) throw BlowupError(state.t, l2);
}

void Integrator::step(SolverState& state) const {
    const int mx = p_.modes_x, my = p_.modes_y;
    SpectralField g = frozen_term(state.omega);

    // Exact convolution increments, folded across the fine noise grid so the
    // same keyed draws serve every nesting of this step size.
    Eigen::ArrayXXd eta_lin = Eigen::ArrayXXd::Zero(mx, my);
    Eigen::ArrayXXd eta_wa = Eigen::ArrayXXd::Zero(mx, my);
    if (has_noise_) {
        const uint64_t stream = rng::stream_key(state.wa.seed, state.wa.trajectory);
        const uint64_t base = state.wa.step * uint64_t(substeps_);
        for (int s = 0; s < substeps_; ++s) {
            for (int i = 0; i < mx; ++i)
                for (int j = 0; j < my; ++j) {
                    if (sigma_wa_f_(i, j) == 0.0) continue;
                    const double xi = rng::normal(stream, uint32_t(i + 1), uint32_t(j + 1),
                                                  base + uint64_t(s), rng::Tag::convolution);
                    eta_lin(i, j) = decay_lin_f_(i, j) * eta_lin(i, j) + sigma_lin_f_(i, j) * xi;
                    eta_wa(i, j) = decay_wa_f_(i, j) * eta_wa(i, j) + sigma_wa_f_(i, j) * xi;
                }
        }
    }

    if (state.scheme == Scheme::mild_em) {
        state.omega.coeffs =
            (decay_lin_ * state.omega.coeffs.array() + phi1h_ * g.coeffs.array() + eta_lin)
                .matrix();
        // companion convolution state, kept for records and the bound monitor
        state.wa.coeffs.coeffs =
            (decay_wa_ * state.wa.coeffs.coeffs.array() + eta_wa).matrix();
    } else {
        // U' = (A - r) U + [G(omega) - r W_A]; omega reconstructed as U + W_A.
        Eigen::ArrayXXd u = state.omega.coeffs.array() - state.wa.coeffs.coeffs.array();
        const Eigen::ArrayXXd gs = g.coeffs.array() - p_.r * state.wa.coeffs.coeffs.array();
        u = decay_lin_ * u + phi1h_ * gs;
        state.wa.coeffs.coeffs =
            (decay_wa_ * state.wa.coeffs.coeffs.array() + eta_wa).matrix();
        state.omega.coeffs = (u + state.wa.coeffs.coeffs.array()).matrix();
    }

    state.wa.step += 1;
    state.wa.t += h_;
    state.t += h_;
    check_finite(state);
}

SolverState step_mild_em(const SolverState& state, double h, const ModelParams& p,
                         const NoiseSpec& spec) {
    Integrator integ(p, spec, h);
    SolverState out = state;
    out.scheme = Scheme::mild_em;
    integ.step(out);
    return out;
}

SolverState step_split(const SolverState& state, double h, const ModelParams& p,
                       const NoiseSpec& spec) {
    Integrator integ(p, spec, h);
    SolverState out = state;
    out.scheme = Scheme::split;
    integ.step(out);
    return out;
}

SpectralField exact_linear_solution(Mode mode, const ModelParams& p, double t) {
    p.validate();
    if (p.beta != 0.0)
        throw std::domain_error("exact_linear_solution requires beta = 0");
    const double rate = eigenvalue(mode, p.nu) - p.r;
    return SpectralField::single(mode, p.modes_x, p.modes_y, std::exp(rate * t));
}

TrajectoryRecord simulate(const ModelParams& p, const NoiseSpec& spec,
                          const SpectralField& omega0, double T, double h, Scheme scheme,
                          const SimOptions& opts, uint64_t seed, uint64_t trajectory) {
    p.validate();
    if (!(T > 0.0)) throw std::domain_error("simulate: T must be positive");
    if (!(h > 0.0 && h <= T)) throw std::domain_error("simulate: need 0 < h <= T");
    if (omega0.modes_x() != p.modes_x || omega0.modes_y() != p.modes_y)
        throw std::invalid_argument("simulate: initial data truncation mismatch");

    const long nsteps = std::lround(T / h);
    Integrator integ(p, spec, h, opts.noise_substeps, opts.jacobian_enabled, opts.blowup_cap);
    SolverState state = SolverState::initial(omega0, scheme, seed, trajectory);

    TrajectoryRecord rec;
    rec.h = h;
    rec.scheme = scheme;
    rec.seed = seed;
    rec.trajectory = trajectory;
    rec.physical = p.physical();
    rec.jacobian_enabled = opts.jacobian_enabled;

    auto record = [&](const SolverState& st) {
        const Norms nw = norms(st.omega);
        rec.t.push_back(st.t);
        rec.l2.push_back(nw.l2);
        rec.h1.push_back(nw.h1_semi);
        rec.sup_est.push_back(nw.sup_estimate);
        rec.drift_l2.push_back(norms(drift(st.omega, p)).l2);
        const SpectralField u = st.split_variable();
        rec.u_l2.push_back(u.coeffs.norm());
        rec.wa_sup.push_back(norms(st.wa.coeffs).sup_estimate);
        if (opts.keep_fields) {
            rec.u_fields.push_back(u.coeffs);
            rec.wa_fields.push_back(st.wa.coeffs.coeffs);
        }
    };

    record(state);
    if (opts.snapshot_sink && opts.snapshot_stride > 0) opts.snapshot_sink(state.t, state.omega);
    try {
        for (long k = 1; k <= nsteps; ++k) {
            integ.step(state);
            if (k % opts.record_stride == 0 || k == nsteps) record(state);
            if (opts.snapshot_sink && opts.snapshot_stride > 0 && k % opts.snapshot_stride == 0)
                opts.snapshot_sink(state.t, state.omega);
        }
    } catch (const BlowupError& e) {
        rec.aborted = true;
        rec.abort_reason = e.what();
    }
    return rec;
}

}  // namespace qgstorm
