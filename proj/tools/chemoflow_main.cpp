// ============================================================================
// chemoflow command-line driver
//
// subcommands:
//   simulate            run one configuration, write diagnostics + snapshots
//   sweep               cartesian parameter sweep with per-cell run dirs
//   check-inequalities  randomized functional-inequality ensembles
//   verify              named end-to-end check suites
// ============================================================================

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chemoflow/config_file.hpp"
#include "chemoflow/inequality_lab.hpp"
#include "chemoflow/output.hpp"
#include "chemoflow/runner.hpp"

using namespace chemoflow;
using nlohmann::json;

namespace {

void print_fits(const RunOutput& ro) {
    for (const auto& f : ro.fits) {
        if (f.valid)
            std::printf("  fit %-11s lambda=%.6g r2=%.4f (%d pts)\n",
                        f.column.c_str(), f.lambda, f.r_squared, f.points);
        else
            std::printf("  fit %-11s unavailable\n", f.column.c_str());
    }
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 long seed_override, bool has_seed) {
    SimConfig cfg = load_config(config_path);
    if (has_seed) cfg.seed = static_cast<unsigned long>(seed_override);
    const RunOutput ro = run(cfg, out_dir);
    std::printf("run: %s\n", ro.completed ? "completed" : "ABORTED");
    if (!ro.completed) std::printf("  reason: %s\n", ro.abort_reason.c_str());
    std::printf("  steps=%ld final_time=%.9g\n", ro.steps, ro.final_time);
    std::printf("  mass_rel_drift=%.3e min_n=%.6g min_c=%.6g\n",
                ro.mass_rel_drift, ro.min_n_over_run, ro.min_c_over_run);
    print_fits(ro);
    if (ro.s_star_value > 0.0)
        std::printf("  s_star=%.6g (s0=%.6g, %s threshold)\n", ro.s_star_value,
                    cfg.s0, cfg.s0 < ro.s_star_value ? "below" : "above");
    std::printf("  diagnostics: %s\n", ro.diagnostics_csv.c_str());
    std::printf("  summary:     %s\n", ro.summary_path.c_str());
    return ro.completed ? 0 : 2;
}

int cmd_sweep(const std::string& config_path,
              const std::vector<std::string>& axis_specs,
              const std::string& out_root, int workers) {
    const SimConfig base = load_config(config_path);
    std::vector<SweepAxis> axes;
    for (const auto& spec : axis_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--axis wants key=v1,v2,...  got '" + spec + "'");
        SweepAxis ax;
        ax.key = spec.substr(0, eq);
        std::string rest = spec.substr(eq + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const auto comma = rest.find(',', pos);
            const auto piece = rest.substr(
                pos, comma == std::string::npos ? std::string::npos
                                                : comma - pos);
            if (!piece.empty()) ax.values.push_back(piece);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (ax.values.empty())
            throw ConfigError("--axis '" + ax.key + "' has no values");
        axes.push_back(std::move(ax));
    }
    const SweepReport rep = sweep(base, axes, out_root, workers);
    int failures = 0;
    for (const auto& cell : rep.cells) {
        std::string params;
        for (const auto& [k, v] : cell.params) params += " " + k + "=" + v;
        std::printf("cell %04d%s: %s (sup|n|=%.6g, %s)\n", cell.index,
                    params.c_str(), cell.status.c_str(), cell.sup_linf_n,
                    cell.verdict.c_str());
        if (cell.status != "ok") ++failures;
    }
    std::printf("aggregate: %s\n", rep.aggregate_csv.c_str());
    return failures == 0 ? 0 : 2;
}

int cmd_check_inequalities(int trials, unsigned long seed, int grid_n,
                           const std::string& out_dir) {
    const auto stats = run_inequality_ensembles(trials, seed, grid_n);
    ensure_dir(out_dir);
    std::string csv =
        "# schema=1\ncheck,trials,violations,min_slack,max_slack,max_minimal_C\n";
    json jsum = json::array();
    long total_violations = 0;
    for (const auto& s : stats) {
        csv += s.name + "," + std::to_string(s.trials) + "," +
               std::to_string(s.violations) + "," + format_g17(s.min_slack) +
               "," + format_g17(s.max_slack) + "," +
               format_g17(s.max_minimal_C) + "\n";
        jsum.push_back({{"check", s.name},
                        {"trials", s.trials},
                        {"violations", s.violations},
                        {"min_slack", s.min_slack},
                        {"max_slack", s.max_slack},
                        {"max_minimal_C", s.max_minimal_C}});
        total_violations += s.violations;
        std::printf("%-22s trials=%-4d violations=%-3d min_slack=%.3e\n",
                    s.name.c_str(), int(s.trials), int(s.violations),
                    s.min_slack);
    }
    write_text_file(out_dir + "/inequalities.csv", csv);
    write_text_file(out_dir + "/inequalities.json", jsum.dump(2) + "\n");
    std::printf("%s\n", total_violations == 0 ? "all checks held"
                                              : "VIOLATIONS FOUND");
    return total_violations == 0 ? 0 : 2;
}

int cmd_verify(const std::string& suite, const std::string& work_dir) {
    const VerifyReport rep = verify(suite, work_dir);
    for (const auto& l : rep.lines)
        std::printf("[%s] %-32s measured=%-12.6g threshold=%-10.6g %s\n",
                    l.pass ? "PASS" : "FAIL", l.name.c_str(), l.measured,
                    l.threshold, l.detail.c_str());
    json j{{"suite", rep.suite}, {"pass", rep.pass}};
    json lines = json::array();
    for (const auto& l : rep.lines)
        lines.push_back({{"name", l.name},
                         {"pass", l.pass},
                         {"measured", l.measured},
                         {"threshold", l.threshold},
                         {"detail", l.detail}});
    j["lines"] = lines;
    ensure_dir(work_dir);
    write_text_file(work_dir + "/verify_" + suite + ".json", j.dump(2) + "\n");
    std::printf("suite %s: %s\n", rep.suite.c_str(),
                rep.pass ? "PASS" : "FAIL");
    return rep.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic chemotaxis-fluid simulator and check bench"};
    app.require_subcommand(1);

    // ---- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "run one configuration");
    std::string sim_config, sim_out = "out";
    long sim_seed = 0;
    sim->add_option("--config", sim_config, "config file (TOML subset)")
        ->required()
        ->check(CLI::ExistingFile);
    sim->add_option("--out", sim_out, "output directory");
    auto* seed_opt =
        sim->add_option("--seed", sim_seed, "override the config seed");

    // ---- sweep -------------------------------------------------------------
    auto* sw = app.add_subcommand("sweep", "cartesian parameter sweep");
    std::string sw_config, sw_out = "sweep_out";
    std::vector<std::string> sw_axes;
    int sw_workers = 0;
    sw->add_option("--config", sw_config, "base config file")
        ->required()
        ->check(CLI::ExistingFile);
    sw->add_option("--axis", sw_axes,
                   "axis as key=v1,v2,... (repeatable; first varies slowest)")
        ->required();
    sw->add_option("--out", sw_out, "sweep output root");
    sw->add_option("--workers", sw_workers,
                   "parallel runs (default: CHEMOFLOW_WORKERS env, else 1)")
        ->check(CLI::PositiveNumber);

    // ---- check-inequalities --------------------------------------------------
    auto* ck = app.add_subcommand("check-inequalities",
                                  "randomized functional-inequality ensembles");
    int ck_trials = 100, ck_grid = 32;
    unsigned long ck_seed = 2024;
    std::string ck_out = "ineq_out";
    ck->add_option("--trials", ck_trials, "trials per check")
        ->check(CLI::PositiveNumber);
    ck->add_option("--seed", ck_seed, "ensemble master seed");
    ck->add_option("--grid", ck_grid, "trial grid resolution")
        ->check(CLI::Range(8, 512));
    ck->add_option("--out", ck_out, "report directory");

    // ---- verify --------------------------------------------------------------
    auto* vf = app.add_subcommand("verify", "run a named check suite");
    std::string vf_suite, vf_out = "verify_out";
    std::string suites_help = "one of:";
    for (const auto& s : verify_suites()) suites_help += " " + s;
    vf->add_option("--suite", vf_suite, suites_help)->required();
    vf->add_option("--out", vf_out, "suite work directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(sim_config, sim_out, sim_seed,
                                seed_opt->count() > 0);
        if (sw->parsed())
            return cmd_sweep(sw_config, sw_axes, sw_out, sw_workers);
        if (ck->parsed())
            return cmd_check_inequalities(ck_trials, ck_seed, ck_grid, ck_out);
        if (vf->parsed()) return cmd_verify(vf_suite, vf_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
