#include "chemoflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "chemoflow/diagnostics.hpp"
#include "chemoflow/elliptic.hpp"
#include "chemoflow/inequality_lab.hpp"
#include "chemoflow/ops.hpp"
#include "chemoflow/spectral.hpp"

namespace chemoflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

VerifyLine make_line(std::string name, bool pass, double measured,
                     double threshold, std::string detail = "") {
    VerifyLine l;
    l.name = std::move(name);
    l.pass = pass;
    l.measured = measured;
    l.threshold = threshold;
    l.detail = std::move(detail);
    return l;
}

// least-squares slope of ln(err) against ln(h)
double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [h, e] : pts) {
        const double x = std::log(h), y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = double(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// ----------------------------------------------------------------------------
// suite: conservation — total cell mass under transport and flow coupling
// ----------------------------------------------------------------------------

VerifyReport suite_conservation(const std::string& work_dir) {
    VerifyReport rep;
    rep.suite = "conservation";
    for (const bool fluid : {false, true}) {
        for (const unsigned long seed : {11UL, 12UL, 13UL}) {
            SimConfig cfg;
            cfg.nx = cfg.ny = 64;
            cfg.lx = cfg.ly = 1.0;
            cfg.dt_max = 1e-3;
            cfg.t_end = 1e9;  // step cap, not time, ends the run
            cfg.max_steps = 10000;
            cfg.cfl = 0.4;
            cfg.fluid = fluid;
            cfg.gamma = 1.0;
            cfg.s0 = 0.5;
            cfg.s1 = fluid ? 0.5 : 0.0;
            cfg.sensitivity_variant = "isotropic";
            cfg.phi = fluid ? "cos:0.1,1,1" : "zero";
            cfg.n0 = "random:1.0,0.5";
            cfg.u0 = fluid ? "random:0.4" : "zero";
            cfg.out_every = 1.0;
            cfg.seed = seed;
            const std::string tag = (fluid ? std::string("coupled-seed")
                                           : std::string("pure-seed")) +
                                    std::to_string(seed);
            const RunOutput ro =
                run(cfg, work_dir + "/conservation/" + tag);
            const bool ok = ro.completed && ro.mass_rel_drift <= 1e-9;
            rep.lines.push_back(make_line(
                "mass-drift-" + tag, ok, ro.mass_rel_drift, 1e-9,
                ro.completed ? "steps=" + std::to_string(ro.steps)
                             : "aborted: " + ro.abort_reason));
        }
    }
    return rep;
}

// ----------------------------------------------------------------------------
// suite: elliptic-order — signal solve convergence on a known profile
// ----------------------------------------------------------------------------

VerifyReport suite_elliptic_order(const std::string&) {
    VerifyReport rep;
    rep.suite = "elliptic-order";
    // source 1 + cos(pi x) has the steady signal 1 + cos(pi x)/(1 + pi^2)
    const double amp_exact = 1.0 / (1.0 + kPi * kPi);
    std::vector<std::pair<double, double>> errs, resids;
    double amp_fine = 0.0;
    for (const int nn : {32, 64, 128}) {
        Grid g{nn, nn, 1.0, 1.0};
        SpectralSolver fft(g);
        ScalarField n(g), exact(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                n(i, j) = 1.0 + std::cos(kPi * g.xc(i));
                exact(i, j) = 1.0 + amp_exact * std::cos(kPi * g.xc(i));
            }
        MacVelocity u(g);
        const ScalarField c = solve_signal(n, u, fft, 1e-12);
        double err = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k)
            err = std::max(err, std::abs(c.v[k] - exact.v[k]));
        errs.emplace_back(g.hx(), err);
        resids.emplace_back(
            g.hx(), std::abs(weighted_identity_residual(c, n, 1.0, 1.0)));
        if (nn == 128) {
            // cosine-mode amplitude of the solved deviation
            double num = 0.0, den = 0.0;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double m = std::cos(kPi * g.xc(i));
                    num += (c(i, j) - 1.0) * m;
                    den += m * m;
                }
            amp_fine = num / den;
        }
    }
    const double order = loglog_slope(errs);
    rep.lines.push_back(make_line("signal-solve-order", order >= 1.7, order, 1.7,
                                  "e32=" + fmt(errs[0].second) +
                                      " e128=" + fmt(errs[2].second)));
    const double amp_err = std::abs(amp_fine - amp_exact);
    rep.lines.push_back(make_line("signal-amplitude", amp_err <= 1e-4, amp_err,
                                  1e-4, "amp=" + fmt(amp_fine) +
                                            " exact=" + fmt(amp_exact)));
    const double rorder = loglog_slope(resids);
    rep.lines.push_back(make_line(
        "weighted-identity-order", rorder >= 1.7, rorder, 1.7,
        "r32=" + fmt(resids[0].second) + " r128=" + fmt(resids[2].second)));
    return rep;
}

// ----------------------------------------------------------------------------
// suite: decay-case-i — vanishing symmetric part, energy decays at heat rate
// ----------------------------------------------------------------------------

VerifyReport suite_decay_case_i(const std::string& work_dir) {
    VerifyReport rep;
    rep.suite = "decay-case-i";
    SimConfig cfg;
    cfg.nx = cfg.ny = 64;
    cfg.lx = cfg.ly = 1.0;
    cfg.dt_max = 1e-3;
    cfg.t_end = 0.5;
    cfg.cfl = 0.4;
    cfg.fluid = false;
    cfg.gamma = 1.0;
    cfg.s0 = 0.5;
    cfg.s1 = 0.0;
    cfg.sensitivity_variant = "rotational";
    cfg.sensitivity_angle = kPi / 2.0;  // purely antisymmetric tensor
    cfg.n0 = "cosx:1.0,0.3";
    cfg.u0 = "zero";
    cfg.out_every = 0.0;  // a row per step
    const RunOutput ro = run(cfg, work_dir + "/decay-case-i");

    long violations = 0;
    double worst = 0.0;
    for (std::size_t k = 1; k < ro.series.size(); ++k) {
        const double prev = ro.series[k - 1].lyapunov;
        const double cur = ro.series[k].lyapunov;
        if (cur > prev * (1.0 + 1e-12)) {
            ++violations;
            worst = std::max(worst, cur / std::max(prev, 1e-300) - 1.0);
        }
    }
    rep.lines.push_back(make_line(
        "energy-monotone", ro.completed && violations == 0, double(violations),
        0.0, "rows=" + std::to_string(ro.series.size()) +
                 " worst_uptick=" + fmt(worst)));

    const double mu1 = mu1_rectangle(cfg.lx, cfg.ly);
    const double rate_floor = 0.9 * 2.0 * mu1;
    const DecaySummary* f = ro.fit("lyapunov");
    const bool ok = ro.completed && f && f->valid && f->lambda >= rate_floor;
    rep.lines.push_back(make_line(
        "energy-rate", ok, f && f->valid ? f->lambda : 0.0, rate_floor,
        f && f->valid ? "r2=" + fmt(f->r_squared) : "fit unavailable"));
    return rep;
}

// ----------------------------------------------------------------------------
// suite: decay-case-ii — drift strength below the stabilization threshold
// ----------------------------------------------------------------------------

VerifyReport suite_decay_case_ii(const std::string& work_dir) {
    VerifyReport rep;
    rep.suite = "decay-case-ii";
    const double mu1 = mu1_rectangle(1.0, 1.0);
    const double sstar = s_star(1.0, 1.0, mu1, 1.0);  // power factor is 1 here
    for (const double frac : {0.25, 0.5, 0.75}) {
        SimConfig cfg;
        cfg.nx = cfg.ny = 64;
        cfg.lx = cfg.ly = 1.0;
        cfg.dt_max = 1e-3;
        cfg.t_end = 1.0;
        cfg.cfl = 0.4;
        cfg.fluid = false;
        cfg.gamma = 1.0;
        cfg.s0 = frac * sstar;
        cfg.s1 = 0.0;
        cfg.sensitivity_variant = "isotropic";
        cfg.n0 = "cosx:1.0,0.3";
        cfg.u0 = "zero";
        cfg.out_every = 0.0;
        std::ostringstream tag;
        tag << "frac" << frac;
        const RunOutput ro =
            run(cfg, work_dir + "/decay-case-ii/" + tag.str());
        for (const char* col : {"dev_n_linf", "lyapunov"}) {
            const DecaySummary* f = ro.fit(col);
            const bool valid = ro.completed && f && f->valid;
            const bool ok =
                valid && f->lambda > 0.0 && f->r_squared >= 0.95;
            rep.lines.push_back(make_line(
                std::string(col) + "-" + tag.str(), ok,
                valid ? f->lambda : 0.0, 0.0,
                valid ? "r2=" + fmt(f->r_squared) +
                            " s0=" + fmt(cfg.s0)
                      : "fit unavailable"));
        }
    }
    return rep;
}

// ----------------------------------------------------------------------------
// shared long run: coupled flow, strong peak, bounded-orbit probe
// ----------------------------------------------------------------------------

SimConfig probe_config() {
    SimConfig cfg;
    cfg.nx = cfg.ny = 128;
    cfg.lx = cfg.ly = 1.0;
    cfg.dt_max = 5e-3;
    cfg.t_end = 20.0;
    cfg.cfl = 0.4;
    cfg.fluid = true;
    cfg.gamma = 1.0;
    cfg.s0 = 1.0;
    cfg.s1 = 1.0;
    cfg.sensitivity_variant = "isotropic";
    cfg.phi = "linear:0,0.1";
    cfg.n0 = "gaussian:0.1,20,0.085";
    cfg.u0 = "zero";
    cfg.out_every = 0.02;
    // early times: the signal still carries live gradients there, which is
    // what the localized-modulus checks need
    cfg.snapshot_times = {0.01, 0.025, 0.05, 0.1};
    cfg.seed = 7;
    return cfg;
}

}  // namespace

const RunOutput& shared_boundedness_probe(const std::string& work_dir) {
    static std::mutex m;
    static std::map<std::string, RunOutput> cache;
    std::lock_guard<std::mutex> lk(m);
    auto it = cache.find(work_dir);
    if (it == cache.end())
        it = cache
                 .emplace(work_dir,
                          run(probe_config(), work_dir + "/boundedness-probe"))
                 .first;
    return it->second;
}

namespace {

VerifyReport suite_boundedness_probe(const std::string& work_dir) {
    VerifyReport rep;
    rep.suite = "boundedness-probe";
    const RunOutput& ro = shared_boundedness_probe(work_dir);
    rep.lines.push_back(make_line("probe-completed", ro.completed,
                                  double(ro.steps), 0.0,
                                  ro.completed ? "t_end=" + fmt(ro.final_time)
                                               : ro.abort_reason));
    const double ratio =
        ro.sup_linf_last / std::max(ro.sup_linf_first, 1e-300);
    rep.lines.push_back(make_line(
        "sup-ratio", ro.completed && ratio <= kBoundedRatio, ratio,
        kBoundedRatio,
        "first=" + fmt(ro.sup_linf_first) + " last=" + fmt(ro.sup_linf_last)));
    rep.lines.push_back(make_line("signal-positive", ro.min_c_over_run > 0.0,
                                  ro.min_c_over_run, 0.0, ""));
    return rep;
}

VerifyReport suite_keypro_modulus(const std::string& work_dir) {
    VerifyReport rep;
    rep.suite = "keypro-modulus";
    const RunOutput& ro = shared_boundedness_probe(work_dir);
    const std::vector<double> deltas{0.05, 0.1, 0.2, 0.3, 0.4};
    int checked = 0;
    for (const auto& snap : ro.snapshots) {
        if (snap.field != "c" || snap.t <= 0.0) continue;
        // the end-of-run persistence duplicates the last scheduled time
        if (snap.ascii_path.find("final_") != std::string::npos ||
            snap.ascii_path.find("last_good_") != std::string::npos)
            continue;
        double t_read = 0.0;
        const ScalarField c = read_snapshot(snap.ascii_path, &t_read);
        const auto mod = gradient_modulus(c, deltas, 2.0, 1.0, 16);
        bool monotone = true;
        for (std::size_t k = 1; k < mod.size(); ++k)
            if (mod[k].value + 1e-15 < mod[k - 1].value) monotone = false;
        const double small = mod.front().value, big = mod.back().value;
        std::ostringstream tag;
        tag << "t" << snap.t;
        rep.lines.push_back(make_line("modulus-monotone-" + tag.str(),
                                      monotone, monotone ? 0.0 : 1.0, 0.0,
                                      "small=" + fmt(small) +
                                          " big=" + fmt(big)));
        const double ratio = small / std::max(big, 1e-300);
        rep.lines.push_back(make_line("modulus-vanishing-" + tag.str(),
                                      ratio <= 0.2, ratio, 0.2, ""));
        ++checked;
    }
    if (checked == 0)
        rep.lines.push_back(
            make_line("modulus-snapshots", false, 0.0, 1.0,
                      "probe produced no signal snapshots"));
    return rep;
}

VerifyReport suite_inequalities(const std::string&) {
    VerifyReport rep;
    rep.suite = "inequalities";
    const auto stats = run_inequality_ensembles(100, 2024);
    for (const auto& s : stats) {
        std::ostringstream d;
        d << "trials=" << s.trials << " min_slack=" << fmt(s.min_slack);
        if (s.max_minimal_C > 0.0) d << " max_minC=" << fmt(s.max_minimal_C);
        rep.lines.push_back(make_line("ensemble-" + s.name, s.violations == 0,
                                      double(s.violations), 0.0, d.str()));
    }
    return rep;
}

}  // namespace

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> suites{
        "conservation",   "elliptic-order", "decay-case-i",
        "decay-case-ii",  "keypro-modulus", "inequalities",
        "boundedness-probe"};
    return suites;
}

VerifyReport verify(const std::string& suite, const std::string& work_dir) {
    VerifyReport rep;
    if (suite == "conservation")
        rep = suite_conservation(work_dir);
    else if (suite == "elliptic-order")
        rep = suite_elliptic_order(work_dir);
    else if (suite == "decay-case-i")
        rep = suite_decay_case_i(work_dir);
    else if (suite == "decay-case-ii")
        rep = suite_decay_case_ii(work_dir);
    else if (suite == "keypro-modulus")
        rep = suite_keypro_modulus(work_dir);
    else if (suite == "inequalities")
        rep = suite_inequalities(work_dir);
    else if (suite == "boundedness-probe")
        rep = suite_boundedness_probe(work_dir);
    else {
        std::string all;
        for (const auto& s : verify_suites()) all += " " + s;
        throw ConfigError("unknown verify suite '" + suite + "'; known:" + all);
    }
    rep.pass = !rep.lines.empty();
    for (const auto& l : rep.lines) rep.pass = rep.pass && l.pass;
    return rep;
}

}  // namespace chemoflow
