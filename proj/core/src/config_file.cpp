#include "chemoflow/config_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "chemoflow/errors.hpp"

namespace chemoflow {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// strip an unquoted trailing comment
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size())
            throw ConfigError(key + ": trailing characters in number '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        throw ConfigError(key + ": cannot parse number '" + v + "'");
    }
}

long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size())
            throw ConfigError(key + ": trailing characters in integer '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        throw ConfigError(key + ": cannot parse integer '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string parse_string(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    return v;  // bare word
}

std::vector<double> parse_array(const std::string& key, const std::string& v) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ConfigError(key + ": expected an array [..], got '" + v + "'");
    std::vector<double> out;
    std::string body = v.substr(1, v.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    return out;
}

}  // namespace

void apply_config_key(SimConfig& cfg, const std::string& key,
                      const std::string& raw) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError(key + ": empty value");

    if (key == "grid.nx") cfg.nx = int(parse_int(key, v));
    else if (key == "grid.ny") cfg.ny = int(parse_int(key, v));
    else if (key == "grid.lx") cfg.lx = parse_double(key, v);
    else if (key == "grid.ly") cfg.ly = parse_double(key, v);
    else if (key == "time.dt_max") cfg.dt_max = parse_double(key, v);
    else if (key == "time.t_end") cfg.t_end = parse_double(key, v);
    else if (key == "time.cfl") cfg.cfl = parse_double(key, v);
    else if (key == "time.max_steps") cfg.max_steps = parse_int(key, v);
    else if (key == "time.dt_min") cfg.dt_min = parse_double(key, v);
    else if (key == "model.fluid") cfg.fluid = parse_bool(key, v);
    else if (key == "model.gamma") cfg.gamma = parse_double(key, v);
    else if (key == "model.s0") cfg.s0 = parse_double(key, v);
    else if (key == "model.s1") cfg.s1 = parse_double(key, v);
    else if (key == "model.phi") cfg.phi = parse_string(v);
    else if (key == "model.wgrad_betas") cfg.wgrad_betas = parse_array(key, v);
    else if (key == "model.sensitivity.variant")
        cfg.sensitivity_variant = parse_string(v);
    else if (key == "model.sensitivity.angle")
        cfg.sensitivity_angle = parse_double(key, v);
    else if (key == "model.sensitivity.a") cfg.nsd_a = parse_double(key, v);
    else if (key == "model.sensitivity.b") cfg.nsd_b = parse_double(key, v);
    else if (key == "model.sensitivity.omega")
        cfg.nsd_omega = parse_double(key, v);
    else if (key == "ic.n0") cfg.n0 = parse_string(v);
    else if (key == "ic.u0") cfg.u0 = parse_string(v);
    else if (key == "solver.linear_tol") cfg.linear_tol = parse_double(key, v);
    else if (key == "output.every") cfg.out_every = parse_double(key, v);
    else if (key == "output.snapshots") cfg.snapshot_times = parse_array(key, v);
    else if (key == "output.snapshots_binary")
        cfg.snapshots_binary = parse_bool(key, v);
    else
        throw ConfigError("unknown config key '" + key + "'");
}

SimConfig parse_config_text(const std::string& text) {
    SimConfig cfg;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": empty section header");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        const std::string dotted = section.empty() ? key : section + "." + key;
        apply_config_key(cfg, dotted, val);
    }
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_text(const SimConfig& cfg) {
    auto num = [](double x) {
        char b[32];
        std::snprintf(b, sizeof b, "%.17g", x);
        return std::string(b);
    };
    auto arr = [&](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ", ";
            s += num(v[i]);
        }
        return s + "]";
    };
    std::string s;
    s += "[grid]\n";
    s += "nx = " + std::to_string(cfg.nx) + "\n";
    s += "ny = " + std::to_string(cfg.ny) + "\n";
    s += "lx = " + num(cfg.lx) + "\n";
    s += "ly = " + num(cfg.ly) + "\n";
    s += "\n[time]\n";
    s += "dt_max = " + num(cfg.dt_max) + "\n";
    s += "t_end = " + num(cfg.t_end) + "\n";
    s += "cfl = " + num(cfg.cfl) + "\n";
    s += "max_steps = " + std::to_string(cfg.max_steps) + "\n";
    s += "dt_min = " + num(cfg.dt_min) + "\n";
    s += "\n[model]\n";
    s += std::string("fluid = ") + (cfg.fluid ? "true" : "false") + "\n";
    s += "gamma = " + num(cfg.gamma) + "\n";
    s += "s0 = " + num(cfg.s0) + "\n";
    s += "s1 = " + num(cfg.s1) + "\n";
    s += "phi = \"" + cfg.phi + "\"\n";
    s += "wgrad_betas = " + arr(cfg.wgrad_betas) + "\n";
    s += "\n[model.sensitivity]\n";
    s += "variant = \"" + cfg.sensitivity_variant + "\"\n";
    s += "angle = " + num(cfg.sensitivity_angle) + "\n";
    s += "a = " + num(cfg.nsd_a) + "\n";
    s += "b = " + num(cfg.nsd_b) + "\n";
    s += "omega = " + num(cfg.nsd_omega) + "\n";
    s += "\n[ic]\n";
    s += "n0 = \"" + cfg.n0 + "\"\n";
    s += "u0 = \"" + cfg.u0 + "\"\n";
    s += "\n[solver]\n";
    s += "linear_tol = " + num(cfg.linear_tol) + "\n";
    s += "\n[output]\n";
    s += "every = " + num(cfg.out_every) + "\n";
    s += "snapshots = " + arr(cfg.snapshot_times) + "\n";
    s += std::string("snapshots_binary = ") +
         (cfg.snapshots_binary ? "true" : "false") + "\n";
    return s;
}

}  // namespace chemoflow
