// ============================================================================
//  acceptance — end-to-end checks of the shipped behavior, one line each.
//
//  Usage: acceptance [work_dir]
//
//  Every criterion prints exactly one [PASS]/[FAIL] line with the measured
//  number and the pinned threshold; the exit status is the failure count.
//  Expect a minute or two of wall time: two of the criteria integrate the
//  coupled system on fine grids.
// ============================================================================

#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include "chemoflow/config_file.hpp"
#include "chemoflow/inequality_lab.hpp"
#include "chemoflow/output.hpp"
#include "chemoflow/runner.hpp"

using namespace chemoflow;

namespace {

int g_failures = 0;

void criterion(const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
    std::fflush(stdout);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

const VerifyLine* find_line(const VerifyReport& rep, const std::string& prefix) {
    for (const auto& l : rep.lines)
        if (l.name.rfind(prefix, 0) == 0) return &l;
    return nullptr;
}

int count_passed(const VerifyReport& rep) {
    int ok = 0;
    for (const auto& l : rep.lines) ok += l.pass ? 1 : 0;
    return ok;
}

std::string first_failure(const VerifyReport& rep) {
    for (const auto& l : rep.lines)
        if (!l.pass)
            return "; first failure: " + l.name + " measured " +
                   fmt(l.measured) + " vs " + fmt(l.threshold);
    return "";
}

// --------------------------------------------------------------------------
// 1. mass conservation across seeded pure and coupled runs
// --------------------------------------------------------------------------
void check_mass_conservation(const std::string& work) {
    const VerifyReport rep = verify("conservation", work);
    double worst = 0.0;
    for (const auto& l : rep.lines) worst = std::max(worst, l.measured);
    criterion("mass-conservation", rep.pass,
              std::to_string(count_passed(rep)) + "/" +
                  std::to_string(rep.lines.size()) +
                  " runs, worst rel drift " + fmt(worst) + " (tol 1e-09)" +
                  first_failure(rep));
}

// --------------------------------------------------------------------------
// 2. the homogeneous state is an exact fixed point of the full loop
// --------------------------------------------------------------------------
void check_homogeneous_fixed_point(const std::string& work) {
    SimConfig cfg;
    cfg.nx = cfg.ny = 64;
    cfg.dt_max = 0.05;
    cfg.t_end = 10.0;
    cfg.cfl = 0.4;
    cfg.fluid = true;  // exercises the hydrostatic balance of the forcing
    cfg.gamma = 1.0;
    cfg.s0 = 1.0;
    cfg.s1 = 1.0;
    cfg.phi = "linear:0,0.1";
    cfg.n0 = "uniform:1.0";
    cfg.u0 = "zero";
    cfg.out_every = 0.0;  // record every step
    cfg.seed = 1;
    const RunOutput out = run(cfg, work + "/homogeneous");
    double worst = 0.0;
    for (const auto& r : out.series) worst = std::max(worst, r.dev_n_linf);
    const bool pass = out.completed && worst <= 1e-12;
    criterion("homogeneous-fixed-point", pass,
              "max |n - mean| " + fmt(worst) + " over " +
                  std::to_string(out.steps) + " steps (tol 1e-12)" +
                  (out.completed ? "" : "; aborted: " + out.abort_reason));
}

// --------------------------------------------------------------------------
// 3./4. signal solve accuracy and the weighted identity under refinement
// --------------------------------------------------------------------------
void check_signal_accuracy(const std::string& work) {
    const VerifyReport rep = verify("elliptic-order", work);
    const VerifyLine* order = find_line(rep, "signal-solve-order");
    const VerifyLine* amp = find_line(rep, "signal-amplitude");
    const bool pass = order && order->pass && amp && amp->pass;
    criterion("signal-solve-accuracy", pass,
              order && amp ? "order " + fmt(order->measured) +
                                 " (>= " + fmt(order->threshold) +
                                 "), amplitude err " + fmt(amp->measured) +
                                 " (tol " + fmt(amp->threshold) + ")"
                           : "suite lines missing");
}

void check_weighted_identity(const std::string& work) {
    const VerifyReport rep = verify("elliptic-order", work);
    const VerifyLine* wid = find_line(rep, "weighted-identity-order");
    criterion("weighted-identity-refine", wid && wid->pass,
              wid ? "order " + fmt(wid->measured) + " (>= " +
                        fmt(wid->threshold) + ")"
                  : "suite line missing");
}

// --------------------------------------------------------------------------
// 5. fluid-free decay: monotone energy with the expected rate
// --------------------------------------------------------------------------
void check_fluid_free_decay(const std::string& work) {
    const VerifyReport rep = verify("decay-case-i", work);
    const VerifyLine* mono = find_line(rep, "energy-monotone");
    const VerifyLine* rate = find_line(rep, "energy-rate");
    criterion("fluid-free-decay", rep.pass,
              mono && rate
                  ? fmt(mono->measured) + " monotonicity violations; rate " +
                        fmt(rate->measured) + " (>= " + fmt(rate->threshold) +
                        ")"
                  : "suite lines missing" + first_failure(rep));
}

// --------------------------------------------------------------------------
// 6. stabilization below the sensitivity threshold
// --------------------------------------------------------------------------
void check_subcritical(const std::string& work) {
    const VerifyReport rep = verify("decay-case-ii", work);
    double min_lambda = 1e300;
    for (const auto& l : rep.lines) min_lambda = std::min(min_lambda, l.measured);
    criterion("subcritical-stabilization", rep.pass,
              std::to_string(count_passed(rep)) + "/" +
                  std::to_string(rep.lines.size()) +
                  " fits positive with r2 >= 0.95, slowest rate " +
                  fmt(min_lambda) + first_failure(rep));
}

// --------------------------------------------------------------------------
// 7./8. coupled boundedness probe and the gradient-smallness modulus
// --------------------------------------------------------------------------
void check_boundedness(const std::string& work) {
    const VerifyReport rep = verify("boundedness-probe", work);
    const VerifyLine* ratio = find_line(rep, "sup-ratio");
    const VerifyLine* minc = find_line(rep, "signal-positive");
    criterion("coupled-boundedness", rep.pass,
              ratio && minc
                  ? "sup ratio " + fmt(ratio->measured) + " (<= " +
                        fmt(ratio->threshold) + "), min c " +
                        fmt(minc->measured) + " > 0"
                  : "suite lines missing" + first_failure(rep));
}

void check_modulus(const std::string& work) {
    const VerifyReport rep = verify("keypro-modulus", work);
    int snaps = 0;
    double worst_ratio = 0.0;
    for (const auto& l : rep.lines)
        if (l.name.rfind("modulus-vanishing", 0) == 0) {
            ++snaps;
            worst_ratio = std::max(worst_ratio, l.measured);
        }
    criterion("gradient-smallness-modulus", rep.pass,
              std::to_string(snaps) + " snapshots monotone, worst small/large " +
                  "ratio " + fmt(worst_ratio) + " (<= 0.2)" +
                  first_failure(rep));
}

// --------------------------------------------------------------------------
// 9. functional-inequality ensembles and the profile norm table
// --------------------------------------------------------------------------
void check_inequalities(const std::string& work) {
    const VerifyReport rep = verify("inequalities", work);
    const auto rows = psi_eta_norm_table({1e-2, 1e-3, 1e-4});
    bool table_ok = rows.size() == 3;
    for (std::size_t k = 1; table_ok && k < rows.size(); ++k)
        table_ok = rows[k].h1_norm < rows[k - 1].h1_norm &&
                   rows[k].grad_sq_norm < rows[k - 1].grad_sq_norm;
    criterion("inequality-ensembles", rep.pass && table_ok,
              std::to_string(count_passed(rep)) + "/" +
                  std::to_string(rep.lines.size()) +
                  " ensembles clean; profile norms " +
                  (table_ok ? "strictly decreasing" : "NOT decreasing") +
                  first_failure(rep));
}

// --------------------------------------------------------------------------
// 10. bit-identical reruns, including under sweep parallelism
// --------------------------------------------------------------------------
void check_determinism(const std::string& work) {
    SimConfig cfg;
    cfg.nx = cfg.ny = 32;
    cfg.dt_max = 1e-3;
    cfg.t_end = 0.05;
    cfg.out_every = 0.0;
    cfg.fluid = true;
    cfg.gamma = 1.0;
    cfg.s0 = 0.5;
    cfg.s1 = 0.5;
    cfg.phi = "cos:0.1,1,1";
    cfg.n0 = "random:1.0,0.5";
    cfg.u0 = "random:0.3";
    cfg.seed = 2024;

    const RunOutput a = run(cfg, work + "/det_a");
    const RunOutput b = run(cfg, work + "/det_b");
    const bool rerun_same =
        a.completed && b.completed &&
        read_text_file(a.diagnostics_csv) == read_text_file(b.diagnostics_csv);

    const std::vector<SweepAxis> axes{{"model.s0", {"0.3", "0.6"}}};
    const SweepReport s1 = sweep(cfg, axes, work + "/det_sw1", 1);
    const SweepReport s2 = sweep(cfg, axes, work + "/det_sw2", 2);
    bool sweep_same =
        read_text_file(s1.aggregate_csv) == read_text_file(s2.aggregate_csv);
    for (std::size_t k = 0; sweep_same && k < s1.cells.size(); ++k)
        sweep_same = read_text_file(s1.cells[k].out_dir + "/diagnostics.csv") ==
                     read_text_file(s2.cells[k].out_dir + "/diagnostics.csv");

    criterion("bitwise-determinism", rerun_same && sweep_same,
              std::string("rerun bytes ") + (rerun_same ? "equal" : "DIFFER") +
                  "; sweep with 1 vs 2 workers " +
                  (sweep_same ? "equal" : "DIFFERS"));
}

void guarded(const std::string& name, void (*fn)(const std::string&),
             const std::string& work) {
    try {
        fn(work);
    } catch (const std::exception& e) {
        criterion(name, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string work = argc > 1 ? argv[1] : "acceptance_work";
    ensure_dir(work);
    std::printf("acceptance checks, work dir: %s\n", work.c_str());

    guarded("mass-conservation", check_mass_conservation, work);
    guarded("homogeneous-fixed-point", check_homogeneous_fixed_point, work);
    guarded("signal-solve-accuracy", check_signal_accuracy, work);
    guarded("weighted-identity-refine", check_weighted_identity, work);
    guarded("fluid-free-decay", check_fluid_free_decay, work);
    guarded("subcritical-stabilization", check_subcritical, work);
    guarded("coupled-boundedness", check_boundedness, work);
    guarded("gradient-smallness-modulus", check_modulus, work);
    guarded("inequality-ensembles", check_inequalities, work);
    guarded("bitwise-determinism", check_determinism, work);

    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
