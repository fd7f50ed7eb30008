#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gbflow/config.hpp"

namespace gbflow::cli {

// Process exit codes shared by the CLI and the command layer.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kDivergence = 3;
inline constexpr int kIo = 4;

// Resolves the run directory: explicit config.out, else
// $GBFLOW_OUT_ROOT/run (default ./runs/run).
std::filesystem::path resolve_out_dir(const RunConfig& config);

// Simulates and writes the run directory (manifest, snapshots, diagnostics).
int cmd_run(const RunConfig& config, std::ostream& log);

// Fresh run (writing its directory) followed by every applicable check;
// prints one table row per check. Exit 0 iff all applicable checks pass.
int cmd_verify(const RunConfig& config, std::ostream& log);
// Re-verifies a saved run from its directory alone.
int cmd_verify_dir(const std::filesystem::path& dir, std::ostream& log);

// Refinement ladder (n, 2n, 4n with dt/4 per level): prints measured orders
// for solution self-convergence and the residual families; exit 0 iff all
// orders meet the module minima.
int cmd_convergence(const RunConfig& config, std::ostream& log);

// Emits SVG plots for a completed run directory.
int cmd_plot(const std::filesystem::path& run_dir, std::ostream& log);

// Cartesian-product sweep over comma-separated config values, runs executed
// in parallel across a worker pool.
int cmd_sweep(const KeyValueConfig& base, int workers, std::ostream& log);

}  // namespace gbflow::cli
