#pragma once

#include <string>
#include <vector>

#include "strsim/solver.hpp"

namespace strsim {

/// Write every stored snapshot of a run as one delimited-text file:
/// columns t theta x0..x3 v0..v3 w0..w3 lambda_minus lambda_plus delta
/// horizon_gap, with `# key: value` metadata lines up front.
void write_snapshots(const SolveResult& result, const std::string& path);

/// Write the diagnostics report as `key = value` line records.
void write_diagnostics(const DiagnosticsReport& report, const SolveResult& result,
                       const std::string& path);

/// Format a one-line summary per verdict for terminal output.
std::string format_verdicts(const DiagnosticsReport& report);

} // namespace strsim
