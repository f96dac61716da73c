#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgstorm/cli.hpp"
#include "qgstorm/io.hpp"
#include "test_util.hpp"

using namespace qgstorm;
namespace fs = std::filesystem;

namespace {
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qgstorm_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};
}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("defaults") {
    const auto cfg = parse_config_text("");
    CHECK(cfg.nu == 1e-2);
    CHECK(cfg.r == 0.1);
    CHECK(cfg.beta == 1.0);
    CHECK(cfg.gamma == 0.5);
    CHECK(cfg.modes_x == 32);
    CHECK(cfg.modes_y == 32);
    CHECK(cfg.dt == 1e-3);
    CHECK(cfg.T == 1.0);
    CHECK(cfg.mu_rule == "power");
    CHECK(cfg.scheme == "mild_em");
    CHECK(cfg.record_stride == 10);
}

TEST_CASE("rejections carry context") {
    SUBCASE("gamma range") {
        try {
            parse_config_text("gamma=1.5\n", "cfg");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("gamma must lie in (0,1)") != std::string::npos);
            CHECK(std::string(e.what()).find("cfg:1") != std::string::npos);
        }
    }
    SUBCASE("unknown key") {
        try {
            parse_config_text("nu=0.1\nwibble=3\n", "cfg");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("wibble") != std::string::npos);
            CHECK(std::string(e.what()).find("cfg:2") != std::string::npos);
        }
    }
    SUBCASE("malformed line") {
        CHECK_THROWS_AS(parse_config_text("nu 0.1\n"), ConfigError);
    }
    SUBCASE("bad number") {
        CHECK_THROWS_AS(parse_config_text("nu=abc\n"), ConfigError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(parse_config_file("/nonexistent/q.cfg"), ConfigError);
    }
}

TEST_CASE("comments, whitespace, and modes forms") {
    const auto cfg = parse_config_text("# comment\n  nu = 0.5  # trailing\n\nmodes=16x24\n");
    CHECK(cfg.nu == 0.5);
    CHECK(cfg.modes_x == 16);
    CHECK(cfg.modes_y == 24);
    const auto sq = parse_config_text("modes=8\n");
    CHECK(sq.modes_x == 8);
    CHECK(sq.modes_y == 8);
}

TEST_CASE("summability echoed for accepted power rule") {
    const auto cfg = parse_config_text("mu_rule=power\nmu_exponent=1.0\ngamma=0.5\n");
    const auto rep = check_summability(cfg.noise(), cfg.nu, cfg.sum_kmax);
    CHECK(rep.verdict == SummabilityVerdict::converges);
}

TEST_CASE("echo round trip") {
    RunConfig cfg;
    cfg.nu = 0.037;
    cfg.modes_x = 12;
    cfg.modes_y = 20;
    cfg.mu_rule = "band";
    cfg.mu_band = 3;
    cfg.seed = 987654321;
    cfg.scheme = "split";
    cfg.out = "path/to/out.csv";
    cfg.strict = true;
    cfg.dt = 1.0 / 3.0;
    cfg.T = 2.0 / 3.0;
    const auto back = parse_config_text(cfg.echo());
    CHECK(back == cfg);
}

TEST_CASE("format_double round trips") {
    for (double v : {1.0 / 3.0, 0.1, 1e-308, 3.141592653589793, -2.5e17, 0.0}) {
        const std::string s = io::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("snapshot format round trip") {
    TempDir tmp;
    const auto f = test::random_field(6, 9, 77);
    const std::string path = (tmp.path / "field.qgsf").string();
    io::write_snapshot_file(path, f, 1.25);
    const auto snap = io::read_snapshot_file(path);
    CHECK(snap.time == 1.25);
    REQUIRE(snap.field.modes_x() == 6);
    REQUIRE(snap.field.modes_y() == 9);
    CHECK((snap.field.coeffs - f.coeffs).cwiseAbs().maxCoeff() == 0.0);

    // header layout: magic, version, M, N
    std::ifstream is(path, std::ios::binary);
    char head[16];
    is.read(head, 16);
    CHECK(std::string(head, 4) == "QGSF");

    io::write_text_file(path, "not a snapshot at all");
    CHECK_THROWS_AS(io::read_snapshot_file(path), std::runtime_error);
}

TEST_CASE("trajectory csv is lossless") {
    ModelParams p;
    p.modes_x = p.modes_y = 4;
    const auto rec = simulate(p, NoiseSpec{}, test::random_field(4, 4, 5), 0.05, 1e-2,
                              Scheme::split, {}, 3, 0);
    const auto monitor = monitor_bound(rec, p);
    const auto csv = io::trajectory_csv(rec, monitor, {"test=1"});
    const auto rows = io::parse_csv(csv);
    REQUIRE(rows.size() == rec.size());
    for (size_t k = 0; k < rows.size(); ++k) {
        REQUIRE(rows[k].size() == 8);
        CHECK(rows[k][0] == rec.t[k]);
        CHECK(rows[k][1] == rec.l2[k]);
        CHECK(rows[k][2] == rec.h1[k]);
        CHECK(rows[k][3] == rec.sup_est[k]);
        CHECK(rows[k][4] == rec.drift_l2[k]);
        CHECK(rows[k][6] == monitor.a[k]);
        CHECK(rows[k][7] == monitor.b[k]);
    }
}

TEST_CASE("flags override file values") {
    auto cfg = parse_config_text("nu=0.5\nmodes=8\n");
    CHECK(cfg.nu == 0.5);
    apply_key_value(cfg, "nu", "0.25", "--nu");
    apply_key_value(cfg, "scheme", "split", "--scheme");
    CHECK(cfg.nu == 0.25);
    CHECK(cfg.modes_x == 8);  // file value survives where no flag was given
    CHECK(cfg.scheme == "split");
}

TEST_CASE("workers resolution") {
    RunConfig cfg;
    cfg.workers = 3;
    CHECK(cfg.effective_workers() == 3);
    cfg.workers = 0;
    setenv("QGSTORM_WORKERS", "5", 1);
    CHECK(cfg.effective_workers() == 5);
    unsetenv("QGSTORM_WORKERS");
    CHECK(cfg.effective_workers() >= 1);
}

TEST_CASE("command exit codes") {
    TempDir tmp;
    std::ostringstream out, err;

    SUBCASE("simulate succeeds") {
        RunConfig cfg;
        cfg.modes_x = cfg.modes_y = 4;
        cfg.T = 0.05;
        cfg.dt = 1e-2;
        cfg.out = (tmp.path / "traj.csv").string();
        CHECK(cli::cmd_simulate(cfg, out, err) == cli::kOk);
        CHECK(fs::exists(cfg.out));
        std::ifstream is(cfg.out);
        std::string first;
        std::getline(is, first);
        CHECK(first.rfind("# qgstorm", 0) == 0);
    }
    SUBCASE("unwritable output path reports I/O failure") {
        RunConfig cfg;
        cfg.modes_x = cfg.modes_y = 4;
        cfg.T = 0.05;
        cfg.dt = 1e-2;
        cfg.out = (tmp.path / "missing_dir" / "traj.csv").string();
        CHECK(cli::cmd_simulate(cfg, out, err) == cli::kIoError);
    }
    SUBCASE("blow-up guard maps to the runtime exit code") {
        RunConfig cfg;
        cfg.modes_x = cfg.modes_y = 4;
        cfg.T = 0.05;
        cfg.dt = 1e-2;
        cfg.blowup_cap = 1e-6;  // trips immediately on unit initial data
        cfg.out = (tmp.path / "boom.csv").string();
        CHECK(cli::cmd_simulate(cfg, out, err) == cli::kRuntimeError);
        CHECK(err.str().find("blow-up") != std::string::npos);
    }
    SUBCASE("ensemble writes the summary schema") {
        RunConfig cfg;
        cfg.modes_x = cfg.modes_y = 4;
        cfg.T = 0.05;
        cfg.dt = 1e-2;
        cfg.n_traj = 3;
        cfg.workers = 2;
        cfg.out = (tmp.path / "ens.csv").string();
        CHECK(cli::cmd_ensemble(cfg, out, err) == cli::kOk);
        std::ifstream is(cfg.out);
        std::string line, header;
        while (std::getline(is, line))
            if (!line.empty() && line[0] != '#') {
                header = line;
                break;
            }
        CHECK(header == "t,mean_l2,var_l2,ci_l2,mean_sup,var_sup,ci_sup,n_blowup");
    }
    SUBCASE("inconsistent config maps to the config exit code") {
        RunConfig cfg;
        cfg.T = 0.01;
        cfg.dt = 0.1;  // dt > T
        CHECK(cli::cmd_simulate(cfg, out, err) == cli::kConfigError);
        CHECK(err.str().find("dt") != std::string::npos);
    }
    SUBCASE("snapshots write readable QGSF files") {
        RunConfig cfg;
        cfg.modes_x = cfg.modes_y = 4;
        cfg.T = 0.05;
        cfg.dt = 1e-2;
        cfg.snapshots = true;
        cfg.snapshot_stride = 2;
        cfg.out = (tmp.path / "snap.csv").string();
        CHECK(cli::cmd_simulate(cfg, out, err) == cli::kOk);
        int found = 0;
        for (const auto& entry : fs::directory_iterator(tmp.path))
            if (entry.path().extension() == ".qgsf") {
                const auto snap = io::read_snapshot_file(entry.path().string());
                CHECK(snap.field.modes_x() == 4);
                ++found;
            }
        CHECK(found >= 2);
    }
    SUBCASE("r = 0 runs are flagged in the metadata") {
        RunConfig cfg;
        cfg.modes_x = cfg.modes_y = 4;
        cfg.r = 0.0;
        cfg.T = 0.05;
        cfg.dt = 1e-2;
        cfg.out = (tmp.path / "r0.csv").string();
        CHECK(cli::cmd_simulate(cfg, out, err) == cli::kOk);
        std::ifstream is(cfg.out);
        std::stringstream buf;
        buf << is.rdbuf();
        CHECK(buf.str().find("outside the model hypotheses") != std::string::npos);
    }
    SUBCASE("noise-check strict fails on divergent spec") {
        RunConfig cfg;
        cfg.modes_x = cfg.modes_y = 4;
        cfg.mu_exponent = 0.25;  // s < gamma diverges
        cfg.strict = true;
        cfg.kappa_samples = 10000;
        cfg.kappa_rho_grid = 4;
        CHECK(cli::cmd_noise_check(cfg, out, err) == cli::kVerificationFailure);
        CHECK(out.str().find("diverges") != std::string::npos);
        cfg.strict = false;
        CHECK(cli::cmd_noise_check(cfg, out, err) == cli::kOk);
    }
}

TEST_SUITE_END();
