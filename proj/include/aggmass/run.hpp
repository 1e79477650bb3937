#pragma once

#include "aggmass/config.hpp"

namespace aggmass {

// Subcommand bodies. Each one resolves the datum and grid from the config,
// streams the scheme where a full history is not needed, and writes CSV files
// into config.output_dir. Errors propagate as ConfigError / NumericError /
// IoError for the CLI to map onto exit codes.

// Scheme run honouring every requested output: snapshots, shock path, level
// sets, waiting-time report and convergence study.
void run_simulation(const RunConfig& config);

// Explicit solution evaluated at the snapshot times on the configured grid.
// Only the vortex, delta and two-deltas presets have closed forms.
void run_exact(const RunConfig& config);

// Convergence study against the preset's explicit solution, or against a
// fine-grid reference run when no closed form exists.
void run_convergence(const RunConfig& config);

// Analytic waiting-time classification plus the measured onset and the
// barrier upper bound, written as a one-row report.
void run_waiting_time(const RunConfig& config);

// Level-crossing curves for the configured levels at every time step.
void run_level_sets(const RunConfig& config);

}  // namespace aggmass
