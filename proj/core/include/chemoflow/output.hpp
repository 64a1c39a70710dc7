#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "chemoflow/diagnostics.hpp"

namespace chemoflow {

// ============================================================================
// Run artifacts.  Everything is written with %.17g so doubles round-trip
// exactly and identical runs produce identical bytes.
// ============================================================================

std::string format_g17(double x);

void ensure_dir(const std::string& path);                 // mkdir -p
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// ----------------------------------------------------------------------------
// Diagnostics CSV.  Layout:
//   # schema=1
//   t,mass,...,wgrad_beta<b1>,...
//   <rows, %.17g, flushed per row so aborted runs keep their history>
// ----------------------------------------------------------------------------
class DiagnosticsWriter {
  public:
    DiagnosticsWriter(const std::string& csv_path,
                      const std::vector<double>& wgrad_betas);
    void write_row(const DiagnosticsRecord& r);
    const std::string& path() const { return path_; }
    static std::vector<std::string> columns(const std::vector<double>& betas);

  private:
    std::string path_;
    std::ofstream out_;
    std::size_t nbetas_ = 0;
};

// ----------------------------------------------------------------------------
// Field snapshots.  ASCII: one header line
//   nx ny lx ly t field
// followed by ny rows of nx %.17g values (row-major, x fastest).  The
// optional raw variant holds the nx*ny doubles in row-major little-endian
// order with no header; its metadata lives in the run manifest.
// ----------------------------------------------------------------------------
struct SnapshotEntry {
    double t = 0.0;
    std::string field;
    std::string ascii_path;
    std::string binary_path;  // empty when not written
};

SnapshotEntry write_snapshot(const std::string& dir, const std::string& stem,
                             const std::string& field, const ScalarField& f,
                             double t, bool also_binary);

// Reads an ASCII snapshot back; fills *t_out when provided.
ScalarField read_snapshot(const std::string& path, double* t_out = nullptr);

}  // namespace chemoflow
