#include "qgstorm/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qgstorm {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// phi1(z) e^{-z} = (1 - e^{-z})/z and phi2(z) e^{-z} = (1 - e^{-z} - z e^{-z})/z^2,
// both stable for z >= 0.
double p1(double z) { return z < 1e-12 ? 1.0 - 0.5 * z : -std::expm1(-z) / z; }
double p2(double z) {
    if (z < 1e-5) return 0.5 - z / 3.0;
    return (-std::expm1(-z) - z * std::exp(-z)) / (z * z);
}

// log of int_0^dt B(s) e^{abar (dt - s)} ds for B linear from b0 to b1.
double log_segment(double dt, double abar, double b0, double b1) {
    const double z = abar * dt;
    const double val = dt * (b0 * p1(z) - (b0 - b1) * p2(z));
    if (val <= 0.0) return kNegInf;
    return z + std::log(val);
}

double safe_exp(double lg) {
    if (lg > 700.0) return std::numeric_limits<double>::infinity();
    return std::exp(lg);
}

}  // namespace

GronwallCoefficients gronwall_coefficients(const GronwallInput& in) {
    if (in.v_sup < 0.0) throw std::domain_error("gronwall_coefficients: v_sup must be >= 0");
    in.params.validate();
    const double c = in.constants.c();
    const double v = in.v_sup;
    const double r = in.params.r, beta = in.params.beta;
    // Young parameter eps = nu/2 absorbs the 2 eps ||grad U||^2 remainder into
    // the viscous term; 1/eps = 2/nu below.
    const double eps = in.constants.epsilon(in.params.nu);
    GronwallCoefficients out;
    out.a = 2.0 * (r * (1.0 + c * v) + beta * c + c * v * (1.0 + v / eps) + v);
    out.b = 2.0 * beta * c * v * v + 4.0 * c * v * v * v + (4.0 / eps) * c * v * v * v * v;
    return out;
}

std::vector<double> gronwall_bound_log_path(double omega0_l2, const std::vector<double>& times,
                                            const std::vector<double>& a_path,
                                            const std::vector<double>& b_path) {
    const size_t n = times.size();
    if (a_path.size() != n || b_path.size() != n)
        throw std::invalid_argument("gronwall_bound: path length mismatch");
    if (n == 0) return {};
    std::vector<double> out(n);
    const double log_e0 = omega0_l2 > 0.0 ? 2.0 * std::log(omega0_l2) : kNegInf;
    double i_a = 0.0;          // trapezoid of int_0^t A
    double log_forced = kNegInf;  // log int_0^t B e^{int_s^t A} ds
    out[0] = log_e0;
    for (size_t k = 1; k < n; ++k) {
        const double dt = times[k] - times[k - 1];
        const double abar = 0.5 * (a_path[k - 1] + a_path[k]);
        i_a += abar * dt;
        log_forced = logaddexp(log_forced + abar * dt,
                               log_segment(dt, abar, b_path[k - 1], b_path[k]));
        out[k] = logaddexp(log_e0 + i_a, log_forced);
    }
    return out;
}

double gronwall_bound(double omega0_l2, const std::vector<double>& times,
                      const std::vector<double>& a_path, const std::vector<double>& b_path,
                      double t) {
    const auto lg = gronwall_bound_log_path(omega0_l2, times, a_path, b_path);
    size_t best = 0;
    for (size_t k = 0; k < times.size(); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
    return safe_exp(lg.at(best));
}

MonitorReport monitor_bound(const TrajectoryRecord& rec, const ModelParams& p,
                            const ConstantSet& constants) {
    if (rec.u_l2.empty() || rec.wa_sup.empty() || rec.u_l2.size() != rec.t.size())
        throw std::invalid_argument("monitor_bound: record lacks split-variable data");

    MonitorReport rep;
    const size_t n = rec.t.size();
    rep.v_sup.resize(n);
    rep.a.resize(n);
    rep.b.resize(n);
    double running = 0.0;
    for (size_t k = 0; k < n; ++k) {
        running = std::max(running, rec.wa_sup[k]);
        rep.v_sup[k] = running;
        const auto ab = gronwall_coefficients({running, p, constants});
        rep.a[k] = ab.a;
        // corrected term-2 remainder r int|UV| <= (r/2)(||U||^2 + V^2) folded into B
        rep.b[k] = ab.b + p.r * running * running;
    }
    rep.bound_log = gronwall_bound_log_path(rec.u_l2[0], rec.t, rep.a, rep.b);
    rep.margin_log.resize(n);
    rep.satisfied = true;
    rep.min_margin_log = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < n; ++k) {
        // ||U|| = 0 satisfies any bound; avoid the (-inf) - (-inf) ambiguity
        const double margin = rec.u_l2[k] > 0.0
                                  ? rep.bound_log[k] - 2.0 * std::log(rec.u_l2[k])
                                  : std::numeric_limits<double>::infinity();
        rep.margin_log[k] = margin;
        if (!(margin >= 0.0) && rep.satisfied) {
            rep.satisfied = false;
            rep.first_violation_t = rec.t[k];
        }
        rep.min_margin_log = std::min(rep.min_margin_log, margin);
    }
    return rep;
}

double energy_identity_residual(const TrajectoryRecord& rec, size_t center, size_t stride,
                                const ModelParams& p) {
    if (stride == 0) throw std::invalid_argument("energy_identity_residual: zero stride");
    if (rec.u_fields.empty())
        throw std::invalid_argument("energy_identity_residual: record kept without fields");
    if (center < stride || center + stride >= rec.u_fields.size())
        throw std::invalid_argument("energy_identity_residual: window too short");

    const SpectralField u_prev(rec.u_fields[center - stride]);
    const SpectralField u_mid(rec.u_fields[center]);
    const SpectralField u_next(rec.u_fields[center + stride]);
    const SpectralField v_mid(rec.wa_fields[center]);
    const double dt = rec.t[center + stride] - rec.t[center];

    const double lhs =
        (0.5 * u_next.coeffs.squaredNorm() - 0.5 * u_prev.coeffs.squaredNorm()) / (2.0 * dt);

    const GridSpec grid = p.grid();
    const auto& tr = SineTransform::get(u_mid.modes_x(), u_mid.modes_y(), grid);
    const SpectralField small_u = invert_laplacian(u_mid);  // u with U = Lap u
    const SpectralField small_v = invert_laplacian(v_mid);

    const Eigen::MatrixXd ug = tr.synthesize(u_mid.coeffs);
    const Eigen::MatrixXd ux = tr.dx_grid(small_u.coeffs), uy = tr.dy_grid(small_u.coeffs);
    const Eigen::MatrixXd vx = tr.dx_grid(small_v.coeffs), vy = tr.dy_grid(small_v.coeffs);
    // capital-V derivatives (the forcing surrogate at vorticity level)
    const Eigen::MatrixXd cap_vx = tr.dx_grid(v_mid.coeffs), cap_vy = tr.dy_grid(v_mid.coeffs);
    const double w = grid.weight();

    const Norms nu_mid = norms(u_mid);
    double rhs = -p.nu * nu_mid.h1_semi * nu_mid.h1_semi;
    rhs -= p.r * (u_mid.coeffs.squaredNorm() + dot(u_mid, v_mid));
    rhs -= p.beta * w * ((ux + vx).cwiseProduct(ug)).sum();
    // - int J(u+v, V) U = int (-(u+v)_x V_y + (u+v)_y V_x) U
    rhs += w * ((-(ux + vx).cwiseProduct(cap_vy) + (uy + vy).cwiseProduct(cap_vx))
                    .cwiseProduct(ug))
               .sum();
    return std::abs(lhs - rhs);
}

ResidualOrder energy_identity_order(const TrajectoryRecord& rec,
                                    const std::vector<size_t>& strides, const ModelParams& p) {
    ResidualOrder out;
    out.strides = strides;
    for (size_t s : strides) {
        double sum = 0.0;
        long count = 0;
        const size_t n = rec.u_fields.size();
        const size_t smax = *std::max_element(strides.begin(), strides.end());
        for (size_t k = smax; k + smax < n; ++k) {
            sum += energy_identity_residual(rec, k, s, p);
            ++count;
        }
        if (count == 0) throw std::invalid_argument("energy_identity_order: record too short");
        out.mean_residual.push_back(sum / double(count));
    }
    // least-squares slope of log(residual) against log(stride)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const size_t n = strides.size();
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(double(strides[i]));
        const double y = std::log(out.mean_residual[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.order = (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
    return out;
}

PoincareCheck poincare_check(int modes_x, int modes_y) {
    PoincareCheck out;
    out.rayleigh_min = std::numeric_limits<double>::infinity();
    out.elliptic_ok = true;
    for (int m = 1; m <= modes_x; ++m)
        for (int n = 1; n <= modes_y; ++n) {
            const double k2 = (double(m) * m + double(n) * n) * kPi2;
            out.rayleigh_min = std::min(out.rayleigh_min, k2);
            if (k2 > k2 * k2 / (2.0 * kPi2) + 1e-12) out.elliptic_ok = false;
        }
    return out;
}

LadderResult convergence_ladder(const ModelParams& p, const NoiseSpec& spec,
                                const SpectralField& omega0, double T, double h_base, int rungs,
                                int paths, Scheme scheme, uint64_t seed) {
    if (rungs < 3) throw std::domain_error("convergence_ladder: need at least 3 rungs");
    if (paths < 1) throw std::domain_error("convergence_ladder: need at least 1 path");

    LadderResult out;
    for (int j = 0; j + 1 < rungs; ++j) out.h.push_back(h_base / double(1 << j));
    std::vector<double> sq_err(size_t(rungs - 1), 0.0);
    double ref_scale = 0.0;

    // Error of each rung is measured against the next finer one (the finest
    // rung is the reference of the last pair); with coupled noise this keeps
    // the order estimate free of the shared-reference bias that plagues
    // "everything vs finest" comparisons of first-order schemes.
    for (int path = 0; path < paths; ++path) {
        std::vector<Eigen::MatrixXd> finals;
        for (int j = 0; j < rungs; ++j) {
            SimOptions opts;
            opts.noise_substeps = 1 << (rungs - 1 - j);
            opts.record_stride = 1 << 30;  // first and last record only
            opts.keep_fields = true;
            const double h = h_base / double(1 << j);
            TrajectoryRecord rec =
                simulate(p, spec, omega0, T, h, scheme, opts, seed, uint64_t(path));
            if (rec.aborted) throw std::runtime_error("convergence_ladder: trajectory blew up");
            finals.push_back(rec.u_fields.back() + rec.wa_fields.back());
        }
        ref_scale += finals.back().squaredNorm();
        for (int j = 0; j + 1 < rungs; ++j)
            sq_err[size_t(j)] += (finals[size_t(j)] - finals[size_t(j) + 1]).squaredNorm();
    }

    for (int j = 0; j + 1 < rungs; ++j)
        out.rms_error.push_back(std::sqrt(sq_err[size_t(j)] / double(paths)));
    ref_scale = std::sqrt(ref_scale / double(paths));

    const double floor = 1e-11 * (1.0 + ref_scale);
    if (*std::max_element(out.rms_error.begin(), out.rms_error.end()) <= floor) {
        out.exact = true;
        out.slope = 0.0;
        return out;
    }
    for (size_t j = 0; j + 1 < out.rms_error.size(); ++j)
        if (out.rms_error[j + 1] > out.rms_error[j] * 1.05) out.monotone = false;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const size_t n = out.h.size();
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(out.h[i]);
        const double y = std::log(out.rms_error[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.slope = (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
    return out;
}

}  // namespace qgstorm
