#include "chemoflow/sim_config.hpp"

#include <cmath>
#include <sstream>

namespace chemoflow {

SensitivitySpec SimConfig::make_sensitivity() const {
    SensitivitySpec s;
    s.variant = sensitivity_variant_from_string(sensitivity_variant);
    s.s0 = s0;
    s.s1 = s1;
    s.gamma = gamma;
    s.angle = sensitivity_angle;
    s.nsd_a = nsd_a;
    s.nsd_b = nsd_b;
    s.nsd_omega = nsd_omega;
    return s;
}

namespace {
std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double num(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string(what) + ": bad number '" + s + "'");
    }
}
}  // namespace

ScalarField sample_potential(const std::string& desc, const Grid& g) {
    ScalarField phi(g);
    const auto head = split(desc, ':');
    const std::string& kind = head[0];
    if (kind == "zero") return phi;
    if (head.size() != 2) throw ConfigError("model.phi: malformed '" + desc + "'");
    const auto p = split(head[1], ',');
    if (kind == "linear") {
        if (p.size() != 2) throw ConfigError("model.phi: linear needs ax,ay");
        const double ax = num(p[0], "model.phi"), ay = num(p[1], "model.phi");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                phi(i, j) = ax * g.xc(i) + ay * g.yc(j);
        return phi;
    }
    if (kind == "cos") {
        if (p.size() != 3) throw ConfigError("model.phi: cos needs amp,kx,ky");
        const double amp = num(p[0], "model.phi");
        const double kx = num(p[1], "model.phi"), ky = num(p[2], "model.phi");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                phi(i, j) = amp * std::cos(M_PI * kx * g.xc(i) / g.lx) *
                            std::cos(M_PI * ky * g.yc(j) / g.ly);
        return phi;
    }
    throw ConfigError("model.phi: unknown kind '" + kind + "'");
}

std::vector<std::string> validate(const SimConfig& cfg) {
    std::vector<std::string> bad;
    auto fail = [&bad](const std::string& m) { bad.push_back(m); };

    if (cfg.nx < 8 || cfg.ny < 8) fail("grid.nx and grid.ny must be >= 8");
    if (!(cfg.lx > 0.0) || !(cfg.ly > 0.0)) fail("grid.lx and grid.ly must be > 0");
    if (!(cfg.dt_max > 0.0)) fail("time.dt_max must be > 0");
    if (!(cfg.t_end >= 0.0)) fail("time.t_end must be >= 0");
    if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0)) fail("time.cfl must lie in (0,1)");
    if (cfg.max_steps < 0) fail("time.max_steps must be >= 0");
    if (!(cfg.dt_min > 0.0)) fail("time.dt_min must be > 0");

    if (!(cfg.s0 >= 0.0)) fail("model.s0 must be >= 0");
    if (!(cfg.s1 >= 0.0)) fail("model.s1 must be >= 0");
    if (cfg.fluid) {
        // fluid-coupled well-posedness regime: gamma > 1/2 with positive shift
        if (!(cfg.gamma > 0.5)) fail("model.gamma must be > 1/2 when model.fluid = true");
        if (!(cfg.s1 > 0.0)) fail("model.s1 must be > 0 when model.fluid = true");
    } else {
        if (!(cfg.gamma > 0.0)) fail("model.gamma must be > 0");
    }

    try {
        sensitivity_variant_from_string(cfg.sensitivity_variant);
        if (cfg.sensitivity_variant == "custom")
            fail("model.sensitivity.variant 'custom' is API-only, not configurable");
    } catch (const ConfigError& e) {
        fail(e.what());
    }

    if (!(cfg.linear_tol > 0.0 && cfg.linear_tol <= 1e-2))
        fail("solver.linear_tol must lie in (0, 1e-2]");
    if (!(cfg.out_every >= 0.0)) fail("output.every must be >= 0");
    for (double t : cfg.snapshot_times)
        if (!(t >= 0.0)) fail("output.snapshots entries must be >= 0");
    if (cfg.wgrad_betas.empty()) fail("output.wgrad_betas must be nonempty");
    for (double b : cfg.wgrad_betas)
        if (!(b > 0.0)) fail("output.wgrad_betas entries must be > 0");

    // IC / potential descriptors must parse on the target grid
    if (cfg.nx >= 8 && cfg.ny >= 8 && cfg.lx > 0 && cfg.ly > 0) {
        const Grid g(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
        try {
            sample_potential(cfg.phi, g);
        } catch (const ConfigError& e) {
            fail(e.what());
        }
    }
    return bad;
}

void require_valid(const SimConfig& cfg) {
    const auto bad = validate(cfg);
    if (bad.empty()) return;
    std::ostringstream os;
    os << "invalid config:";
    for (const auto& m : bad) os << "\n  - " << m;
    throw ConfigError(os.str());
}

}  // namespace chemoflow
