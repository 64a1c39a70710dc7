#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "chemoflow/config_file.hpp"
#include "chemoflow/errors.hpp"
#include "chemoflow/ops.hpp"
#include "chemoflow/output.hpp"
#include "chemoflow/runner.hpp"

using namespace chemoflow;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& tag) {
    static int serial = 0;
    const std::string p =
        (fs::temp_directory_path() / ("chemoflow_iotest_" + tag + "_" +
                                      std::to_string(serial++)))
            .string();
    fs::remove_all(p);
    return p;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

long count_commas(const std::string& s) {
    long n = 0;
    for (char c : s)
        if (c == ',') ++n;
    return n;
}

}  // namespace

// ============================================================================
// formatting and config files
// ============================================================================

TEST_CASE("g17 formatting round-trips doubles bitwise") {
    for (double x : {0.1, 1.0 / 3.0, 3.141592653589793, 1e-300, -2.5e17, 0.0,
                     6.02e23, -0.0}) {
        const std::string s = format_g17(x);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == x);
    }
}

TEST_CASE("config text round-trips every recognized key") {
    SimConfig a;
    a.nx = 48;
    a.ny = 24;
    a.lx = 1.5;
    a.ly = 0.75;
    a.dt_max = 5e-4;
    a.t_end = 2.5;
    a.cfl = 0.3;
    a.max_steps = 123;
    a.dt_min = 1e-7;
    a.fluid = true;
    a.gamma = 1.5;
    a.s0 = 0.7;
    a.s1 = 0.2;
    a.phi = "cos:0.1,1,1";
    a.sensitivity_variant = "rotational";
    a.sensitivity_angle = 0.7;
    a.nsd_a = 1.2;
    a.nsd_b = 0.8;
    a.nsd_omega = 0.3;
    a.n0 = "random:1.0,0.5";
    a.u0 = "vortex:0.4";
    a.linear_tol = 1e-9;
    a.out_every = 0.05;
    a.snapshot_times = {0.5, 1.0};
    a.snapshots_binary = true;
    a.wgrad_betas = {2.0, 3.0};

    const std::string text = config_to_text(a);
    const SimConfig b = parse_config_text(text);

    CHECK(b.nx == a.nx);
    CHECK(b.ny == a.ny);
    CHECK(b.lx == a.lx);
    CHECK(b.ly == a.ly);
    CHECK(b.dt_max == a.dt_max);
    CHECK(b.t_end == a.t_end);
    CHECK(b.cfl == a.cfl);
    CHECK(b.max_steps == a.max_steps);
    CHECK(b.dt_min == a.dt_min);
    CHECK(b.fluid == a.fluid);
    CHECK(b.gamma == a.gamma);
    CHECK(b.s0 == a.s0);
    CHECK(b.s1 == a.s1);
    CHECK(b.phi == a.phi);
    CHECK(b.sensitivity_variant == a.sensitivity_variant);
    CHECK(b.sensitivity_angle == a.sensitivity_angle);
    CHECK(b.nsd_a == a.nsd_a);
    CHECK(b.nsd_b == a.nsd_b);
    CHECK(b.nsd_omega == a.nsd_omega);
    CHECK(b.n0 == a.n0);
    CHECK(b.u0 == a.u0);
    CHECK(b.linear_tol == a.linear_tol);
    CHECK(b.out_every == a.out_every);
    CHECK(b.snapshot_times == a.snapshot_times);
    CHECK(b.snapshots_binary == a.snapshots_binary);
    CHECK(b.wgrad_betas == a.wgrad_betas);

    // serialization is a fixed point after one round trip
    CHECK(config_to_text(b) == text);
}

TEST_CASE("config parser: comments, quoting, arrays, and typo rejection") {
    const std::string text =
        "# run description\n"
        "[grid]\n"
        "nx = 32   # inline comment\n"
        "ny = 16\n"
        "[model]\n"
        "fluid = false\n"
        "phi = \"linear:0,0.1\"\n"
        "[ic]\n"
        "n0 = uniform:2.0\n"
        "[output]\n"
        "snapshots = [0.25, 0.5, 1.0]\n";
    const SimConfig c = parse_config_text(text);
    CHECK(c.nx == 32);
    CHECK(c.ny == 16);
    CHECK_FALSE(c.fluid);
    CHECK(c.phi == "linear:0,0.1");
    CHECK(c.n0 == "uniform:2.0");
    CHECK(c.snapshot_times == std::vector<double>{0.25, 0.5, 1.0});
    // untouched keys keep their defaults
    CHECK(c.dt_max == SimConfig{}.dt_max);

    CHECK_THROWS_AS(parse_config_text("[grid]\nnxx = 32\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[grid]\nnx = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[junk]\nkey = 1\n"), ConfigError);
}

TEST_CASE("single-key application mirrors the parser") {
    SimConfig c;
    apply_config_key(c, "model.s0", "0.75");
    CHECK(c.s0 == 0.75);
    apply_config_key(c, "model.sensitivity.variant", "negative_semidefinite");
    CHECK(c.sensitivity_variant == "negative_semidefinite");
    apply_config_key(c, "output.snapshots", "[1.0, 2.0]");
    CHECK(c.snapshot_times == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(apply_config_key(c, "model.sZero", "1"), ConfigError);
}

TEST_CASE("config files load from disk") {
    const std::string dir = fresh_dir("cfg");
    ensure_dir(dir);
    write_text_file(dir + "/run.toml", "[grid]\nnx = 40\nny = 40\n");
    const SimConfig c = load_config(dir + "/run.toml");
    CHECK(c.nx == 40);
    CHECK_THROWS_AS(load_config(dir + "/missing.toml"), Error);
}

// ============================================================================
// snapshots and the diagnostics CSV
// ============================================================================

TEST_CASE("snapshots round-trip bitwise, with a raw twin of the right size") {
    Grid g{9, 5, 0.9, 0.5};
    ScalarField f(g);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (auto& x : f.v) x = dist(rng);

    const std::string dir = fresh_dir("snap");
    const SnapshotEntry e = write_snapshot(dir, "state4", "n", f, 1.25, true);
    CHECK(e.t == 1.25);
    CHECK(e.field == "n");
    REQUIRE(fs::exists(e.ascii_path));
    REQUIRE(fs::exists(e.binary_path));
    CHECK(fs::file_size(e.binary_path) == 9 * 5 * sizeof(double));

    double t_back = 0.0;
    const ScalarField back = read_snapshot(e.ascii_path, &t_back);
    CHECK(t_back == 1.25);
    REQUIRE(back.grid.nx == 9);
    REQUIRE(back.grid.ny == 5);
    CHECK(back.grid.lx == 0.9);
    CHECK(back.grid.ly == 0.5);
    CHECK(back.v == f.v);

    CHECK_THROWS_AS(read_snapshot(dir + "/void.dat"), Error);
}

TEST_CASE("diagnostics CSV: schema line, column arity, one row per record") {
    const std::vector<double> betas{2.0, 3.0};
    const auto cols = DiagnosticsWriter::columns(betas);
    REQUIRE(cols.size() >= 4);
    CHECK(cols.front() == "t");
    CHECK(cols[1] == "mass");

    const std::string dir = fresh_dir("csv");
    ensure_dir(dir);
    {
        DiagnosticsWriter w(dir + "/diag.csv", betas);
        DiagnosticsRecord r;
        r.t = 0.0;
        r.mass = 1.0;
        r.weighted_grad = {0.5, 0.25};
        w.write_row(r);
        r.t = 0.125;
        w.write_row(r);
    }
    const auto lines = split_lines(read_text_file(dir + "/diag.csv"));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "# schema=1");
    CHECK(lines[1].rfind("t,mass,", 0) == 0);
    CHECK(count_commas(lines[1]) == long(cols.size()) - 1);
    CHECK(count_commas(lines[2]) == long(cols.size()) - 1);
    CHECK(lines[3].rfind("0.125,", 0) == 0);
}

// ============================================================================
// the run orchestrator
// ============================================================================

namespace {
SimConfig quick_config() {
    SimConfig cfg;
    cfg.nx = cfg.ny = 32;
    cfg.dt_max = 1e-3;
    cfg.t_end = 0.05;
    cfg.out_every = 0.0;  // every step
    cfg.n0 = "uniform:1.0";
    cfg.u0 = "zero";
    cfg.s0 = 0.5;
    cfg.seed = 42;
    return cfg;
}
}  // namespace

TEST_CASE("a uniform rest state survives the full loop untouched") {
    SimConfig cfg = quick_config();
    cfg.t_end = 0.2;
    cfg.dt_max = 5e-3;
    const std::string dir = fresh_dir("steady");
    const RunOutput out = run(cfg, dir);
    CHECK(out.completed);
    CHECK(out.abort_reason.empty());
    CHECK(out.steps >= 40);
    REQUIRE(out.series.size() >= 2);
    for (const auto& r : out.series) CHECK(r.dev_n_linf <= 1e-13);
    CHECK(out.mass_rel_drift <= 1e-13);
    CHECK(out.min_c_over_run > 0.99);

    CHECK(fs::exists(out.diagnostics_csv));
    CHECK(fs::exists(out.summary_path));
    CHECK(fs::exists(out.manifest_path));
    CHECK(fs::exists(dir + "/config.txt"));
    REQUIRE_FALSE(out.snapshots.empty());
    for (const auto& s : out.snapshots) CHECK(fs::exists(s.ascii_path));
    // final persistence snapshot carries both fields
    CHECK(out.snapshots.back().field == "c");
    CHECK(out.snapshots.back().ascii_path.find("final_") != std::string::npos);
}

TEST_CASE("scheduled snapshots appear at their times, named in sequence") {
    SimConfig cfg = quick_config();
    cfg.t_end = 0.03;
    cfg.snapshot_times = {0.0, 0.01, 0.02};
    cfg.snapshots_binary = true;
    const std::string dir = fresh_dir("sched");
    const RunOutput out = run(cfg, dir);
    CHECK(out.completed);
    // 3 scheduled stems + the final stem, two fields each
    REQUIRE(out.snapshots.size() == 8);
    CHECK(out.snapshots[0].ascii_path.find("snap000_n") != std::string::npos);
    CHECK(out.snapshots[2].ascii_path.find("snap001_n") != std::string::npos);
    CHECK(out.snapshots[4].ascii_path.find("snap002_n") != std::string::npos);
    for (const auto& s : out.snapshots) {
        CHECK(fs::exists(s.ascii_path));
        REQUIRE_FALSE(s.binary_path.empty());
        CHECK(fs::exists(s.binary_path));
    }
    CHECK(out.snapshots[2].t == doctest::Approx(0.01).epsilon(1e-9));

    // the manifest mentions every snapshot file
    const std::string manifest = read_text_file(out.manifest_path);
    for (const auto& s : out.snapshots) {
        const std::string base = fs::path(s.ascii_path).filename().string();
        CHECK(manifest.find(base) != std::string::npos);
    }
}

TEST_CASE("a CFL deadlock aborts cleanly and keeps its artifacts") {
    SimConfig cfg = quick_config();
    cfg.n0 = "cosx:1.0,0.3";
    cfg.s0 = 50.0;    // drives the admissible step far below dt_min
    cfg.dt_min = 0.01;
    cfg.dt_max = 0.1;
    cfg.t_end = 1.0;
    const std::string dir = fresh_dir("abort");
    const RunOutput out = run(cfg, dir);
    CHECK_FALSE(out.completed);
    CHECK_FALSE(out.abort_reason.empty());
    REQUIRE_FALSE(out.series.empty());
    CHECK(fs::exists(out.summary_path));
    const std::string summary = read_text_file(out.summary_path);
    CHECK(summary.find("\"completed\": false") != std::string::npos);
    // the last good state was persisted for inspection
    bool has_last_good = false;
    for (const auto& s : out.snapshots)
        if (s.ascii_path.find("last_good_") != std::string::npos)
            has_last_good = true;
    CHECK(has_last_good);
}

TEST_CASE("invalid configs are rejected before any artifact is written") {
    SimConfig cfg = quick_config();
    cfg.cfl = 1.5;
    const std::string dir = fresh_dir("reject");
    CHECK_THROWS_AS(run(cfg, dir), ConfigError);
    CHECK_FALSE(fs::exists(dir + "/diagnostics.csv"));
}

TEST_CASE("identical runs produce identical bytes") {
    SimConfig cfg = quick_config();
    cfg.fluid = true;
    cfg.s1 = 0.5;
    cfg.phi = "cos:0.1,1,1";
    cfg.n0 = "random:1.0,0.5";
    cfg.u0 = "random:0.3";
    cfg.seed = 2718;
    const std::string d1 = fresh_dir("det1");
    const std::string d2 = fresh_dir("det2");
    const RunOutput a = run(cfg, d1);
    const RunOutput b = run(cfg, d2);
    REQUIRE(a.completed);
    REQUIRE(b.completed);
    CHECK(read_text_file(a.diagnostics_csv) == read_text_file(b.diagnostics_csv));
    CHECK(read_text_file(d1 + "/config.txt") == read_text_file(d2 + "/config.txt"));
    CHECK(read_text_file(a.summary_path) == read_text_file(b.summary_path));
}

// ============================================================================
// sweeps
// ============================================================================

TEST_CASE("a sweep enumerates the product grid in row-major order") {
    SimConfig base = quick_config();
    base.t_end = 0.02;
    const std::vector<SweepAxis> axes{{"model.s0", {"0.3", "0.6"}},
                                      {"time.cfl", {"0.3", "0.4"}}};
    const std::string root = fresh_dir("sweep");
    const SweepReport rep = sweep(base, axes, root, 1);
    REQUIRE(rep.cells.size() == 4);
    // first axis slowest
    CHECK(rep.cells[0].params[0].second == "0.3");
    CHECK(rep.cells[0].params[1].second == "0.3");
    CHECK(rep.cells[1].params[0].second == "0.3");
    CHECK(rep.cells[1].params[1].second == "0.4");
    CHECK(rep.cells[3].params[0].second == "0.6");
    for (const auto& cell : rep.cells) {
        CHECK(cell.status == "ok");
        CHECK(cell.verdict == "bounded");
        CHECK(fs::exists(cell.out_dir + "/diagnostics.csv"));
    }
    CHECK(rep.cells[0].out_dir.find("cell_0000") != std::string::npos);
    CHECK(rep.cells[3].out_dir.find("cell_0003") != std::string::npos);

    const auto lines = split_lines(read_text_file(rep.aggregate_csv));
    REQUIRE(lines.size() == 6);  // schema + header + 4 rows
    CHECK(lines[0] == "# schema=1");
    CHECK(lines[1].rfind("cell,model.s0,time.cfl,status,", 0) == 0);
    CHECK(lines[2].rfind("0,0.3,0.3,ok,", 0) == 0);
    CHECK(lines[5].rfind("3,0.6,0.4,ok,", 0) == 0);
}

TEST_CASE("sweep results do not depend on the worker count") {
    SimConfig base = quick_config();
    base.t_end = 0.02;
    base.n0 = "random:1.0,0.4";
    const std::vector<SweepAxis> axes{{"model.s0", {"0.3", "0.6"}}};
    const std::string r1 = fresh_dir("sw1");
    const std::string r2 = fresh_dir("sw2");
    const SweepReport a = sweep(base, axes, r1, 1);
    const SweepReport b = sweep(base, axes, r2, 2);
    CHECK(read_text_file(a.aggregate_csv) == read_text_file(b.aggregate_csv));
    for (std::size_t k = 0; k < a.cells.size(); ++k)
        CHECK(read_text_file(a.cells[k].out_dir + "/diagnostics.csv") ==
              read_text_file(b.cells[k].out_dir + "/diagnostics.csv"));
}

TEST_CASE("sweeps reject empty axes") {
    SimConfig base = quick_config();
    CHECK_THROWS_AS(sweep(base, {}, fresh_dir("swbad"), 1), ConfigError);
    CHECK_THROWS_AS(sweep(base, {{"model.s0", {}}}, fresh_dir("swbad2"), 1),
                    ConfigError);
}
