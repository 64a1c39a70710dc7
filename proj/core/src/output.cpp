#include "chemoflow/output.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <sstream>

#include "chemoflow/errors.hpp"

namespace chemoflow {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("cannot create directory '" + path + "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ============================================================================
// Diagnostics CSV
// ============================================================================

std::vector<std::string> DiagnosticsWriter::columns(
    const std::vector<double>& betas) {
    std::vector<std::string> cols{
        "t",         "mass",      "l2_n",       "l3_n",      "linf_n",
        "entropy",   "n_log_n1",  "grad_log_n1_sq", "kinetic", "enstrophy",
        "min_c",     "c_w1inf",   "lyapunov",   "dev_n_l2",  "dev_n_linf",
        "dev_c_w1inf", "dev_c_h1"};
    for (double b : betas) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "wgrad_beta%g", b);
        cols.push_back(buf);
    }
    return cols;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& csv_path,
                                     const std::vector<double>& wgrad_betas)
    : path_(csv_path), out_(csv_path, std::ios::binary), nbetas_(wgrad_betas.size()) {
    if (!out_) throw Error("cannot open '" + csv_path + "' for writing");
    out_ << "# schema=1\n";
    const auto cols = columns(wgrad_betas);
    for (std::size_t i = 0; i < cols.size(); ++i)
        out_ << (i ? "," : "") << cols[i];
    out_ << "\n";
    out_.flush();
}

void DiagnosticsWriter::write_row(const DiagnosticsRecord& r) {
    if (r.weighted_grad.size() != nbetas_)
        throw Error("diagnostics row has wrong weighted-gradient arity");
    std::string line;
    auto add = [&](double x) {
        if (!line.empty()) line += ",";
        line += format_g17(x);
    };
    add(r.t);
    add(r.mass);
    add(r.l2_n);
    add(r.l3_n);
    add(r.linf_n);
    add(r.entropy);
    add(r.n_log_n1);
    add(r.grad_log_n1_sq);
    add(r.kinetic);
    add(r.enstrophy);
    add(r.min_c);
    add(r.c_w1inf);
    add(r.lyapunov);
    add(r.dev_n_l2);
    add(r.dev_n_linf);
    add(r.dev_c_w1inf);
    add(r.dev_c_h1);
    for (double w : r.weighted_grad) add(w);
    out_ << line << "\n";
    out_.flush();  // crash safety: aborted runs keep every completed row
    if (!out_) throw Error("write failed for '" + path_ + "'");
}

// ============================================================================
// Snapshots
// ============================================================================

SnapshotEntry write_snapshot(const std::string& dir, const std::string& stem,
                             const std::string& field, const ScalarField& f,
                             double t, bool also_binary) {
    ensure_dir(dir);
    SnapshotEntry entry;
    entry.t = t;
    entry.field = field;
    entry.ascii_path = dir + "/" + stem + "_" + field + ".dat";

    const Grid& g = f.grid;
    std::ofstream out(entry.ascii_path, std::ios::binary);
    if (!out) throw Error("cannot open '" + entry.ascii_path + "'");
    out << g.nx << " " << g.ny << " " << format_g17(g.lx) << " "
        << format_g17(g.ly) << " " << format_g17(t) << " " << field << "\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i)
            out << (i ? " " : "") << format_g17(f(i, j));
        out << "\n";
    }
    out.flush();
    if (!out) throw Error("write failed for '" + entry.ascii_path + "'");

    if (also_binary) {
        entry.binary_path = dir + "/" + stem + "_" + field + ".raw";
        std::ofstream raw(entry.binary_path, std::ios::binary);
        if (!raw) throw Error("cannot open '" + entry.binary_path + "'");
        static_assert(sizeof(double) == 8);
        raw.write(reinterpret_cast<const char*>(f.v.data()),
                  std::streamsize(f.v.size() * sizeof(double)));
        raw.flush();
        if (!raw) throw Error("write failed for '" + entry.binary_path + "'");
    }
    return entry;
}

ScalarField read_snapshot(const std::string& path, double* t_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open snapshot '" + path + "'");
    int nx = 0, ny = 0;
    double lx = 0, ly = 0, t = 0;
    std::string field;
    in >> nx >> ny >> lx >> ly >> t >> field;
    if (!in) throw Error("malformed snapshot header in '" + path + "'");
    ScalarField f(Grid(nx, ny, lx, ly));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (!(in >> f(i, j)))
                throw Error("truncated snapshot data in '" + path + "'");
    if (t_out) *t_out = t;
    return f;
}

}  // namespace chemoflow
