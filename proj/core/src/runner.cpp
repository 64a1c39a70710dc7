#include "chemoflow/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "json.hpp"

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/elliptic.hpp"
#include "chemoflow/fluid.hpp"
#include "chemoflow/ops.hpp"
#include "chemoflow/transport.hpp"

namespace chemoflow {

using nlohmann::json;

namespace {

constexpr double kTimeEps = 1e-12;

double col_value(const DiagnosticsRecord& r, const std::string& col) {
    if (col == "dev_n_l2") return r.dev_n_l2;
    if (col == "dev_n_linf") return r.dev_n_linf;
    if (col == "lyapunov") return r.lyapunov;
    if (col == "dev_c_h1") return r.dev_c_h1;
    if (col == "linf_n") return r.linf_n;
    throw Error("unknown series column '" + col + "'");
}

DecaySummary fit_column(const std::vector<DiagnosticsRecord>& rows,
                        const std::string& col) {
    DecaySummary f;
    f.column = col;
    std::vector<std::pair<double, double>> series;
    series.reserve(rows.size());
    for (const auto& r : rows) series.emplace_back(r.t, col_value(r, col));
    try {
        const DecayFit fit = decay_rate(series, 0.5);
        f.lambda = fit.lambda;
        f.r_squared = fit.r_squared;
        f.points = fit.points;
        f.valid = true;
    } catch (const Error&) {
        f.valid = false;
    }
    return f;
}

json fits_to_json(const std::vector<DecaySummary>& fits) {
    json arr = json::array();
    for (const auto& f : fits) {
        json j{{"column", f.column}, {"valid", f.valid}};
        if (f.valid) {
            j["lambda"] = f.lambda;
            j["r_squared"] = f.r_squared;
            j["points"] = f.points;
        }
        arr.push_back(j);
    }
    return arr;
}

}  // namespace

const DecaySummary* RunOutput::fit(const std::string& column) const {
    for (const auto& f : fits)
        if (f.column == column) return &f;
    return nullptr;
}

// ============================================================================
// run
// ============================================================================

RunOutput run(const SimConfig& cfg, const std::string& out_dir) {
    require_valid(cfg);

    const Grid grid = cfg.make_grid();
    const SpectralSolver fft(grid);
    const SensitivitySpec spec = cfg.make_sensitivity();
    const ScalarField phi = sample_potential(cfg.phi, grid);

    ensure_dir(out_dir);
    RunOutput out;
    out.out_dir = out_dir;
    out.diagnostics_csv = out_dir + "/diagnostics.csv";
    out.manifest_path = out_dir + "/manifest.json";
    out.summary_path = out_dir + "/summary.json";
    write_text_file(out_dir + "/config.txt",
                    config_to_text(cfg) + "# seed = " +
                        std::to_string(cfg.seed) + "\n");

    DiagnosticsWriter writer(out.diagnostics_csv, cfg.wgrad_betas);
    State st = initialize(cfg, fft);

    const double mass0 = integrate(st.n);
    out.min_n_over_run = min_value(st.n);
    out.min_c_over_run = min_value(st.c);

    std::vector<double> snaps = cfg.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    std::size_t snap_i = 0;
    int snap_serial = 0;

    auto emit_snapshot = [&](const std::string& stem) {
        out.snapshots.push_back(write_snapshot(out_dir + "/snapshots", stem, "n",
                                               st.n, st.t, cfg.snapshots_binary));
        out.snapshots.push_back(write_snapshot(out_dir + "/snapshots", stem, "c",
                                               st.c, st.t, cfg.snapshots_binary));
    };
    auto record_now = [&]() {
        DiagnosticsRecord r = record(st, cfg);
        writer.write_row(r);
        out.series.push_back(std::move(r));
    };

    record_now();  // t = 0 row (c was solved by initialize)
    while (snap_i < snaps.size() && snaps[snap_i] <= st.t + kTimeEps) {
        char stem[32];
        std::snprintf(stem, sizeof stem, "snap%03d", snap_serial++);
        emit_snapshot(stem);
        ++snap_i;
    }

    double next_out = cfg.out_every > 0.0 ? cfg.out_every : 0.0;
    bool c_fresh = true;  // st.c solves the signal equation for current st.n
    std::string abort_reason;

    while (abort_reason.empty() && st.t < cfg.t_end - kTimeEps &&
           (cfg.max_steps == 0 || out.steps < cfg.max_steps)) {
        try {
            // signal at the current time
            if (!c_fresh) st.c = solve_signal(st.n, st.u, fft, cfg.linear_tol);
            out.min_c_over_run = std::min(out.min_c_over_run, min_value(st.c));

            // combined drift and step-size control
            const FaceField w = drift_field(st.n, st.c, st.u, spec);
            double dt_cfl = cfg.dt_max;
            const double rate_n = max_outflow_rate(w);
            if (rate_n > 0.0) dt_cfl = std::min(dt_cfl, cfg.cfl / rate_n);
            if (cfg.fluid) {
                const double rate_u = momentum_outflow_rate(st.u);
                if (rate_u > 0.0) dt_cfl = std::min(dt_cfl, cfg.cfl / rate_u);
            }
            if (dt_cfl < cfg.dt_min)
                throw TimeStepError(
                    "advective speeds demand a step below dt_min");

            double target = cfg.t_end;
            if (snap_i < snaps.size())
                target = std::min(target, snaps[snap_i]);
            double dt = std::min(dt_cfl, target - st.t);

            // transport (and flow) update, halving on a sharp CFL rejection
            for (;;) {
                try {
                    ScalarField n_new = advance_cells(st.n, w, dt, fft);
                    if (cfg.fluid) {
                        MacVelocity u_new = st.u;
                        ScalarField p_new = st.p;
                        ns_step(u_new, p_new, st.n, phi, dt, fft);
                        st.u = std::move(u_new);
                        st.p = std::move(p_new);
                    }
                    st.n = std::move(n_new);
                    break;
                } catch (const CflError&) {
                    dt *= 0.5;
                    if (dt < cfg.dt_min)
                        throw TimeStepError(
                            "time step collapsed below dt_min");
                }
            }
            st.t += dt;
            out.steps += 1;
            c_fresh = false;

            out.min_n_over_run = std::min(out.min_n_over_run, min_value(st.n));
            out.mass_rel_drift =
                std::max(out.mass_rel_drift,
                         std::abs(integrate(st.n) - mass0) / std::abs(mass0));

            // diagnostics cadence and scheduled snapshots
            const bool at_end = st.t >= cfg.t_end - kTimeEps ||
                                (cfg.max_steps != 0 && out.steps >= cfg.max_steps);
            const bool cadence = cfg.out_every <= 0.0 ||
                                 st.t + kTimeEps >= next_out || at_end;
            const bool snap_due =
                snap_i < snaps.size() && snaps[snap_i] <= st.t + kTimeEps;
            if (cadence || snap_due) {
                st.c = solve_signal(st.n, st.u, fft, cfg.linear_tol);
                c_fresh = true;
                out.min_c_over_run =
                    std::min(out.min_c_over_run, min_value(st.c));
                if (cadence) {
                    record_now();
                    if (cfg.out_every > 0.0)
                        while (next_out <= st.t + kTimeEps)
                            next_out += cfg.out_every;
                }
                while (snap_i < snaps.size() &&
                       snaps[snap_i] <= st.t + kTimeEps) {
                    char stem[32];
                    std::snprintf(stem, sizeof stem, "snap%03d", snap_serial++);
                    emit_snapshot(stem);
                    ++snap_i;
                }
            }
        } catch (const Error& e) {
            abort_reason = e.what();
        } catch (const std::exception& e) {
            abort_reason = std::string("unexpected: ") + e.what();
        }
    }

    out.completed = abort_reason.empty();
    out.abort_reason = abort_reason;
    out.final_time = st.t;

    // last-good persistence: the state here is the last accepted step
    try {
        if (!c_fresh) {
            st.c = solve_signal(st.n, st.u, fft, cfg.linear_tol);
            c_fresh = true;
        }
        if (out.completed &&
            (out.series.empty() || out.series.back().t < st.t - kTimeEps))
            record_now();
        emit_snapshot(out.completed ? "final" : "last_good");
    } catch (const std::exception& e) {
        if (out.completed) {
            out.completed = false;
            out.abort_reason = std::string("finalization failed: ") + e.what();
        }
    }
    out.final_state = st;

    // trailing-window decay fits
    for (const char* col : {"dev_n_l2", "dev_n_linf", "lyapunov", "dev_c_h1"})
        out.fits.push_back(fit_column(out.series, col));

    // sup ||n||_inf over the two halves of the recorded series
    if (!out.series.empty()) {
        const double t0 = out.series.front().t, t1 = out.series.back().t;
        const double tmid = 0.5 * (t0 + t1);
        for (const auto& r : out.series) {
            if (r.t <= tmid)
                out.sup_linf_first = std::max(out.sup_linf_first, r.linf_n);
            else
                out.sup_linf_last = std::max(out.sup_linf_last, r.linf_n);
        }
        if (out.sup_linf_last == 0.0) out.sup_linf_last = out.sup_linf_first;
    }

    // stabilization-threshold report
    json jthresh;
    try {
        out.c_omega = estimate_C_Omega(fft, 16);
        jthresh["c_omega"] = out.c_omega;
        if (cfg.gamma >= 1.0) {
            out.s_star_value = s_star(cfg.gamma, mass0,
                                      mu1_rectangle(grid.lx, grid.ly),
                                      out.c_omega);
            jthresh["s_star"] = out.s_star_value;
            jthresh["s0"] = cfg.s0;
            jthresh["below_threshold"] = cfg.s0 < out.s_star_value;
        } else {
            jthresh["s_star"] = nullptr;
        }
    } catch (const std::exception& e) {
        jthresh["error"] = e.what();
    }

    // manifest
    json jman = json::array();
    for (const auto& s : out.snapshots) {
        json j{{"t", s.t},
               {"field", s.field},
               {"ascii", s.ascii_path},
               {"nx", grid.nx},
               {"ny", grid.ny},
               {"lx", grid.lx},
               {"ly", grid.ly}};
        j["binary"] = s.binary_path.empty() ? json(nullptr) : json(s.binary_path);
        jman.push_back(j);
    }
    write_text_file(out.manifest_path, jman.dump(2) + "\n");

    // summary
    json jsum;
    jsum["completed"] = out.completed;
    jsum["abort_reason"] =
        out.abort_reason.empty() ? json(nullptr) : json(out.abort_reason);
    jsum["steps"] = out.steps;
    jsum["final_time"] = out.final_time;
    jsum["seed"] = cfg.seed;
    if (!out.series.empty()) {
        const DiagnosticsRecord& last = out.series.back();
        jsum["final"] = {{"mass", last.mass},
                         {"l2_n", last.l2_n},
                         {"linf_n", last.linf_n},
                         {"min_c", last.min_c},
                         {"kinetic", last.kinetic},
                         {"lyapunov", last.lyapunov}};
    }
    jsum["audit"] = {
        {"mass_rel_drift_max", out.mass_rel_drift},
        {"min_n_over_run", out.min_n_over_run},
        {"min_c_over_run", out.min_c_over_run},
        {"velocity_walls_closed", st.u.wall_normal_is_zero(0.0)}};
    jsum["fits"] = fits_to_json(out.fits);
    jsum["threshold"] = jthresh;
    jsum["boundedness"] = {
        {"sup_linf_first_half", out.sup_linf_first},
        {"sup_linf_last_half", out.sup_linf_last},
        {"verdict",
         (out.sup_linf_last <=
          kBoundedRatio * std::max(out.sup_linf_first, 1e-300))
             ? "bounded"
             : "growing"}};
    write_text_file(out.summary_path, jsum.dump(2) + "\n");

    return out;
}

// ============================================================================
// sweep
// ============================================================================

namespace {

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("CHEMOFLOW_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return 1;
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

}  // namespace

SweepReport sweep(const SimConfig& base, const std::vector<SweepAxis>& axes,
                  const std::string& out_root, int workers) {
    if (axes.empty()) throw ConfigError("sweep: need at least one axis");
    long total = 1;
    for (const auto& ax : axes) {
        if (ax.values.empty())
            throw ConfigError("sweep: axis '" + ax.key + "' has no values");
        total *= long(ax.values.size());
    }
    if (total > 1024)
        throw ConfigError("sweep: " + std::to_string(total) +
                          " cells exceed the 1024-run cap");
    ensure_dir(out_root);

    auto params_of = [&](long index) {
        // first axis varies slowest
        std::vector<std::pair<std::string, std::string>> params(axes.size());
        long rem = index;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& ax = axes[a];
            params[a] = {ax.key, ax.values[rem % ax.values.size()]};
            rem /= long(ax.values.size());
        }
        return params;
    };

    SweepReport report;
    report.cells.resize(std::size_t(total));
    std::atomic<long> next{0};

    auto work = [&]() {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= total) break;
            SweepCell cell;
            cell.index = int(i);
            cell.params = params_of(i);
            char sub[32];
            std::snprintf(sub, sizeof sub, "cell_%04ld", i);
            cell.out_dir = out_root + "/" + sub;
            cell.verdict = "n/a";
            try {
                SimConfig cfg = base;
                for (const auto& [k, v] : cell.params)
                    apply_config_key(cfg, k, v);
                const RunOutput ro = run(cfg, cell.out_dir);
                for (const auto& r : ro.series)
                    cell.sup_linf_n = std::max(cell.sup_linf_n, r.linf_n);
                if (const auto* f = ro.fit("dev_n_linf")) cell.fit_dev_n_linf = *f;
                if (const auto* f = ro.fit("lyapunov")) cell.fit_lyapunov = *f;
                if (const auto* f = ro.fit("dev_c_h1")) cell.fit_dev_c_h1 = *f;
                if (ro.completed) {
                    cell.status = "ok";
                    cell.verdict =
                        (ro.sup_linf_last <=
                         kBoundedRatio * std::max(ro.sup_linf_first, 1e-300))
                            ? "bounded"
                            : "growing";
                } else {
                    cell.status = "aborted: " + ro.abort_reason;
                }
            } catch (const std::exception& e) {
                cell.status = std::string("error: ") + e.what();
            }
            report.cells[std::size_t(i)] = std::move(cell);
        }
    };

    const int nw = std::min<long>(resolve_workers(workers), total);
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    // deterministic merge: rows in cell order, written after all runs finish
    report.aggregate_csv = out_root + "/sweep.csv";
    std::string csv = "# schema=1\ncell";
    for (const auto& ax : axes) csv += "," + ax.key;
    csv += ",status,sup_linf_n,lambda_dev_n_linf,r2_dev_n_linf"
           ",lambda_lyapunov,r2_lyapunov,lambda_dev_c_h1,r2_dev_c_h1,verdict\n";
    auto fitcols = [](const DecaySummary& f) {
        if (!f.valid) return std::string("nan,nan");
        return format_g17(f.lambda) + "," + format_g17(f.r_squared);
    };
    for (const auto& cell : report.cells) {
        csv += std::to_string(cell.index);
        for (const auto& [k, v] : cell.params) csv += "," + csv_safe(v);
        csv += "," + csv_safe(cell.status);
        csv += "," + format_g17(cell.sup_linf_n);
        csv += "," + fitcols(cell.fit_dev_n_linf);
        csv += "," + fitcols(cell.fit_lyapunov);
        csv += "," + fitcols(cell.fit_dev_c_h1);
        csv += "," + cell.verdict + "\n";
    }
    write_text_file(report.aggregate_csv, csv);
    return report;
}

}  // namespace chemoflow
