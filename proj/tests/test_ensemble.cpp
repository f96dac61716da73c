#include <doctest.h>

#include <cmath>

#include "qgstorm/ensemble.hpp"
#include "test_util.hpp"

using namespace qgstorm;
namespace t = qgstorm::test;

namespace {
EnsembleConfig base_config() {
    EnsembleConfig ec;
    ec.params.modes_x = ec.params.modes_y = 8;
    ec.omega0 = t::random_field(8, 8, 1);
    ec.T = 0.1;
    ec.h = 1e-2;
    ec.base_seed = 5;
    ec.keep_records = true;
    return ec;
}
}  // namespace

TEST_SUITE_BEGIN("ensemble");

TEST_CASE("single trajectory statistics") {
    EnsembleConfig ec = base_config();
    ec.n_traj = 1;
    const auto res = run_ensemble(ec);
    REQUIRE(res.records.size() == 1);
    for (size_t k = 0; k < res.stats.t.size(); ++k) {
        CHECK(res.stats.mean_l2[k] == res.records[0].l2[k]);
        CHECK(res.stats.var_l2[k] == 0.0);
        CHECK(res.stats.ci_l2[k] == 0.0);
    }
}

TEST_CASE("deterministic dynamics have zero variance") {
    EnsembleConfig ec = base_config();
    ec.n_traj = 4;
    ec.noise.mu_rule = MuRule::band;
    ec.noise.mu_band = 0;
    const auto res = run_ensemble(ec);
    for (size_t k = 0; k < res.stats.t.size(); ++k) CHECK(res.stats.var_l2[k] == 0.0);
}

TEST_CASE("worker count never changes results") {
    EnsembleConfig ec = base_config();
    ec.n_traj = 6;
    auto run_with = [&](int workers) {
        EnsembleConfig e = ec;
        e.workers = workers;
        return run_ensemble(e);
    };
    const auto r1 = run_with(1);
    const auto r4 = run_with(4);
    const auto r16 = run_with(16);
    REQUIRE(r1.records.size() == 6);
    for (int i = 0; i < 6; ++i)
        for (size_t k = 0; k < r1.records[size_t(i)].size(); ++k) {
            CHECK(r1.records[size_t(i)].l2[k] == r4.records[size_t(i)].l2[k]);
            CHECK(r1.records[size_t(i)].l2[k] == r16.records[size_t(i)].l2[k]);
        }
    for (size_t k = 0; k < r1.stats.t.size(); ++k) {
        CHECK(r1.stats.mean_l2[k] == r4.stats.mean_l2[k]);
        CHECK(r1.stats.var_sup[k] == r16.stats.var_sup[k]);
    }
}

TEST_CASE("linearized single-band ensemble matches the OU moment") {
    // beta = 0, Jacobian disabled, noise on mode (1,1) only: the l2 norm is
    // |c_11| and E[c_11(T)^2] has the closed OU form with rate lambda - r.
    EnsembleConfig ec;
    ec.params.modes_x = ec.params.modes_y = 4;
    ec.params.nu = 0.5;
    ec.params.r = 0.5;
    ec.params.beta = 0.0;
    ec.noise.mu_rule = MuRule::band;
    ec.noise.mu_band = 1;
    ec.omega0 = SpectralField::zero(4, 4);
    ec.T = 0.5;
    ec.h = 1e-2;
    ec.n_traj = 1000;
    ec.base_seed = 11;
    ec.workers = 2;
    ec.sim.jacobian_enabled = false;
    ec.keep_records = true;
    const auto res = run_ensemble(ec);

    const double rate = eigenvalue(Mode{1, 1}, ec.params.nu) - ec.params.r;
    const double expect = (1.0 - std::exp(2.0 * rate * ec.T)) / (2.0 * std::abs(rate));
    double mean_sq = 0.0;
    for (const auto& rec : res.records) mean_sq += rec.l2.back() * rec.l2.back();
    mean_sq /= double(ec.n_traj);
    const double se = expect * std::sqrt(2.0 / double(ec.n_traj));
    CHECK(std::abs(mean_sq - expect) <= 3.0 * se);
}

TEST_CASE("ou variance test") {
    ModelParams p;
    p.modes_x = p.modes_y = 2;
    NoiseSpec spec;

    SUBCASE("t = 0 passes trivially") {
        const auto rep = ou_variance_test(spec, p, 0.0, 2000, 1);
        CHECK(rep.pass_fraction == 1.0);
        for (const auto& e : rep.entries) CHECK(e.sample_var == 0.0);
    }
    SUBCASE("transient variance at t = 0.05") {
        const auto rep = ou_variance_test(spec, p, 0.05, 10000, 1);
        REQUIRE(rep.entries.size() == 4);
        for (const auto& e : rep.entries) {
            CHECK(e.expected_var > 0.0);
            CHECK(e.pass);
        }
    }
    SUBCASE("large t approaches stationarity") {
        const auto rep = ou_variance_test(spec, p, 50.0, 3000, 3);
        for (const auto& e : rep.entries) {
            const double lambda = std::abs(eigenvalue(e.mode, p.nu));
            const double mu = spec.mu(e.mode, 2, 2);
            CHECK(e.expected_var == doctest::Approx(mu / (2.0 * lambda)).epsilon(1e-6));
            CHECK(e.pass);
        }
    }
    SUBCASE("draw count precondition") {
        CHECK_THROWS_AS(ou_variance_test(spec, p, 0.05, 100, 1), std::domain_error);
    }
}

TEST_CASE("pass fraction over fresh batches stays near nominal") {
    ModelParams p;
    p.modes_x = p.modes_y = 8;
    NoiseSpec spec;
    long passed = 0, total = 0;
    for (uint64_t batch = 0; batch < 8; ++batch) {
        const auto rep = ou_variance_test(spec, p, 0.1, 1500, 1000 + batch);
        for (const auto& e : rep.entries) {
            ++total;
            if (e.pass) ++passed;
        }
    }
    const double fraction = double(passed) / double(total);
    const double se = std::sqrt(0.99 * 0.01 / double(total));
    CHECK(fraction >= 0.99 - 3.0 * se);
}

TEST_SUITE_END();
