#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chemoflow/config_file.hpp"
#include "chemoflow/output.hpp"
#include "chemoflow/state.hpp"

namespace chemoflow {

// ============================================================================
// Orchestration: one run, parameter sweeps, and the named verification
// suites used by the CLI and the acceptance tests.
// ============================================================================

struct DecaySummary {
    std::string column;
    double lambda = 0.0;
    double r_squared = 0.0;
    int points = 0;
    bool valid = false;  // false when the fit was impossible (zeros, too short)
};

struct RunOutput {
    std::string out_dir;
    std::string diagnostics_csv;
    std::string manifest_path;
    std::string summary_path;
    std::vector<SnapshotEntry> snapshots;
    std::vector<DiagnosticsRecord> series;  // in-memory copy of the CSV rows
    State final_state;
    long steps = 0;
    double final_time = 0.0;
    bool completed = false;    // no abort (reached t_end or the step cap)
    std::string abort_reason;  // populated when completed == false

    // audits accumulated every step (not just at the output cadence)
    double mass_rel_drift = 0.0;
    double min_n_over_run = 0.0;
    double min_c_over_run = 0.0;

    // trailing-window exponential fits of selected series columns
    std::vector<DecaySummary> fits;

    // stabilization-threshold report (meaningful for gamma >= 1)
    double c_omega = 0.0;
    double s_star_value = 0.0;

    // sup ||n||_inf over the first and second halves of the run
    double sup_linf_first = 0.0;
    double sup_linf_last = 0.0;

    const DecaySummary* fit(const std::string& column) const;
};

// Execute one simulation, writing diagnostics.csv, snapshots, manifest.json
// and summary.json under out_dir.  Aborts (solver stall, CFL deadlock, NaN)
// are reported in the return value — artifacts written so far are kept and
// a last-good snapshot is persisted.  Config errors throw before anything
// is written.
RunOutput run(const SimConfig& cfg, const std::string& out_dir);

// ----------------------------------------------------------------------------
// Parameter sweeps: the cartesian product of the axes, one run per cell in
// cell_<index> subdirectories, plus an aggregate sweep.csv whose rows are in
// cell order regardless of worker scheduling.  Worker count: explicit
// argument > 0, else the CHEMOFLOW_WORKERS environment variable, else 1.
// ----------------------------------------------------------------------------
struct SweepAxis {
    std::string key;                  // dotted config key, e.g. "model.s0"
    std::vector<std::string> values;  // textual values, parsed per key
};

struct SweepCell {
    int index = 0;
    std::vector<std::pair<std::string, std::string>> params;
    std::string status;  // "ok", "aborted: ...", or "error: ..."
    std::string out_dir;
    double sup_linf_n = 0.0;
    DecaySummary fit_dev_n_linf, fit_lyapunov, fit_dev_c_h1;
    std::string verdict;  // "bounded" / "growing" / "n/a"
};

struct SweepReport {
    std::string aggregate_csv;
    std::vector<SweepCell> cells;
};

SweepReport sweep(const SimConfig& base, const std::vector<SweepAxis>& axes,
                  const std::string& out_root, int workers = 0);

// Ratio threshold for the bounded/growing verdict: last-half sup over
// first-half sup of ||n||_inf.
constexpr double kBoundedRatio = 1.05;

// ----------------------------------------------------------------------------
// Named verification suites (machine-readable pass/fail).
// ----------------------------------------------------------------------------
struct VerifyLine {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    bool pass = false;
    std::vector<VerifyLine> lines;
};

const std::vector<std::string>& verify_suites();
VerifyReport verify(const std::string& suite, const std::string& work_dir);

// The fluid-coupled boundedness probe shared by the boundedness-probe and
// keypro-modulus suites; cached per work_dir within the process so running
// both suites costs one simulation.
const RunOutput& shared_boundedness_probe(const std::string& work_dir);

}  // namespace chemoflow
