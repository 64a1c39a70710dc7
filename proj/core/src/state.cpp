#include "chemoflow/state.hpp"

#include <array>
#include <cmath>
#include <random>

#include "chemoflow/elliptic.hpp"
#include "chemoflow/fluid.hpp"
#include "chemoflow/ops.hpp"

namespace chemoflow {

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

std::vector<std::string> args_of(const std::string& desc, const char* what,
                                 std::string& kind) {
    const auto head = split(desc, ':');
    kind = head[0];
    if (head.size() == 1) return {};
    if (head.size() != 2) throw ConfigError(std::string(what) + ": malformed '" + desc + "'");
    return split(head[1], ',');
}

// Smooth random cosine mixture: Neumann-compatible by construction, with a
// 1/(1+k^2+m^2) spectral rolloff.
ScalarField random_cosine_field(const Grid& g, double base, double amp,
                                int modes, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<std::array<double, 3>> terms;  // {a_km, k, m}
    for (int k = 0; k <= modes; ++k)
        for (int m = 0; m <= modes; ++m) {
            if (k == 0 && m == 0) continue;
            terms.push_back({coef(rng) / (1.0 + k * k + m * m), double(k), double(m)});
        }
    ScalarField f(g, base);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double s = 0.0;
            for (const auto& t : terms)
                s += t[0] * std::cos(M_PI * t[1] * g.xc(i) / g.lx) *
                     std::cos(M_PI * t[2] * g.yc(j) / g.ly);
            f(i, j) += amp * s;
        }
    return f;
}

// Stream function sampled at grid corners; its discrete curl is a face field
// that is divergence-free to round-off and wall-impermeable by construction.
MacVelocity curl_of_corner_stream(const Grid& g,
                                  const std::function<double(double, double)>& psi) {
    MacVelocity u(g, 0.0);
    const double ihx = 1.0 / g.hx();
    const double ihy = 1.0 / g.hy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            u.u[u.uidx(i, j)] =
                (psi(g.xf(i), g.yf(j + 1)) - psi(g.xf(i), g.yf(j))) * ihy;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u.v[u.vidx(i, j)] =
                -(psi(g.xf(i + 1), g.yf(j)) - psi(g.xf(i), g.yf(j))) * ihx;
    return u;
}
}  // namespace

ScalarField sample_density(const std::string& desc, const Grid& g,
                           unsigned long long seed) {
    std::string kind;
    const auto a = args_of(desc, "ic.n0", kind);
    ScalarField n(g);

    if (kind == "uniform") {
        if (a.size() != 1) throw ConfigError("ic.n0: uniform needs one value");
        const double v = num(a[0], "ic.n0");
        n = ScalarField(g, v);
    } else if (kind == "cosx" || kind == "cosy") {
        if (a.size() != 2) throw ConfigError("ic.n0: " + kind + " needs base,amp");
        const double base = num(a[0], "ic.n0"), amp = num(a[1], "ic.n0");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                n(i, j) = base + amp * (kind == "cosx"
                                            ? std::cos(M_PI * g.xc(i) / g.lx)
                                            : std::cos(M_PI * g.yc(j) / g.ly));
    } else if (kind == "gaussian") {
        if (a.size() != 3 && a.size() != 5)
            throw ConfigError("ic.n0: gaussian needs base,peak,sigma[,cx,cy]");
        const double base = num(a[0], "ic.n0");
        const double peak = num(a[1], "ic.n0");
        const double sigma = num(a[2], "ic.n0");
        const double cx = a.size() == 5 ? num(a[3], "ic.n0") : 0.5 * g.lx;
        const double cy = a.size() == 5 ? num(a[4], "ic.n0") : 0.5 * g.ly;
        if (!(sigma > 0.0)) throw ConfigError("ic.n0: gaussian sigma must be > 0");
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double dx = g.xc(i) - cx, dy = g.yc(j) - cy;
                n(i, j) = base + (peak - base) *
                                     std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            }
    } else if (kind == "random") {
        if (a.size() != 2 && a.size() != 3)
            throw ConfigError("ic.n0: random needs base,amp[,modes]");
        const double base = num(a[0], "ic.n0"), amp = num(a[1], "ic.n0");
        const int modes = a.size() == 3 ? int(num(a[2], "ic.n0")) : 6;
        if (modes < 1 || modes > 64) throw ConfigError("ic.n0: random modes out of range");
        n = random_cosine_field(g, base, amp, modes, seed * 0x9e3779b97f4a7c15ULL + 1);
    } else {
        throw ConfigError("ic.n0: unknown kind '" + kind + "'");
    }

    for (double& x : n.v)
        if (x < 0.0) x = 0.0;  // density must be nonnegative
    require_finite(n, "ic.n0");
    if (!(integrate(n) > 0.0))
        throw ConfigError("ic.n0: initial mass must be positive");
    return n;
}

MacVelocity sample_velocity(const std::string& desc, const Grid& g,
                            unsigned long long seed) {
    std::string kind;
    const auto a = args_of(desc, "ic.u0", kind);

    if (kind == "zero") return MacVelocity(g, 0.0);

    if (kind == "vortex") {
        if (a.empty() || a.size() > 3)
            throw ConfigError("ic.u0: vortex needs amp[,kx,ky]");
        const double amp = num(a[0], "ic.u0");
        const double kx = a.size() > 1 ? num(a[1], "ic.u0") : 1.0;
        const double ky = a.size() > 2 ? num(a[2], "ic.u0") : 1.0;
        auto psi = [&](double x, double y) {
            return amp * std::sin(M_PI * kx * x / g.lx) * std::sin(M_PI * ky * y / g.ly);
        };
        return curl_of_corner_stream(g, psi);
    }
    if (kind == "random") {
        if (a.empty() || a.size() > 2)
            throw ConfigError("ic.u0: random needs amp[,modes]");
        const double amp = num(a[0], "ic.u0");
        const int modes = a.size() > 1 ? int(num(a[1], "ic.u0")) : 4;
        if (modes < 1 || modes > 64) throw ConfigError("ic.u0: random modes out of range");
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 2);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        std::vector<std::array<double, 3>> terms;
        for (int k = 1; k <= modes; ++k)
            for (int m = 1; m <= modes; ++m)
                terms.push_back({coef(rng) / (k * k + m * m), double(k), double(m)});
        auto psi = [&, terms](double x, double y) {
            double s = 0.0;
            for (const auto& t : terms)
                s += t[0] * std::sin(M_PI * t[1] * x / g.lx) *
                     std::sin(M_PI * t[2] * y / g.ly);
            return amp * s;
        };
        return curl_of_corner_stream(g, psi);
    }
    if (kind == "grad") {
        if (a.size() != 1) throw ConfigError("ic.u0: grad needs amp");
        const double amp = num(a[0], "ic.u0");
        ScalarField f(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                f(i, j) = amp * std::cos(M_PI * g.xc(i) / g.lx) *
                          std::cos(M_PI * g.yc(j) / g.ly);
        return gradient(f);
    }
    throw ConfigError("ic.u0: unknown kind '" + kind + "'");
}

State initialize(const SimConfig& cfg, const SpectralSolver& fft) {
    require_valid(cfg);
    const Grid g = cfg.make_grid();
    require_same_grid(g, fft.grid(), "initialize");

    State s;
    s.t = 0.0;
    s.n = sample_density(cfg.n0, g, cfg.seed);

    if (cfg.fluid) {
        MacVelocity raw = sample_velocity(cfg.u0, g, cfg.seed);
        raw.zero_wall_normal();
        s.u = project(raw, fft);
    } else {
        s.u = MacVelocity(g, 0.0);
    }

    s.c = solve_signal(s.n, s.u, fft, cfg.linear_tol);
    s.p = ScalarField(g, 0.0);
    return s;
}

State initialize(const SimConfig& cfg) {
    require_valid(cfg);
    SpectralSolver fft(cfg.make_grid());
    return initialize(cfg, fft);
}

}  // namespace chemoflow
