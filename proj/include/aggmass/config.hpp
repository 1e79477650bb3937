#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aggmass/core.hpp"

namespace aggmass {

// Line-oriented key = value configuration with [section] headers and '#'
// comments. Parsing fails closed: unknown sections or keys, duplicate keys,
// malformed numbers and incomplete preset parameters are all errors.

enum class Preset { vortex, delta, two_deltas, power_beta, custom_samples };

std::string preset_name(Preset preset);

struct RunConfig {
  // [model]
  double alpha = 0.0;  // required
  int dim = 1;
  std::optional<double> omega_d;

  // [grid]
  double h_rho = 0.0;    // required
  double t_final = 0.0;  // required
  std::optional<double> domain_length;  // auto-sized from the datum if absent
  std::optional<double> h_t;            // stability-bound default if absent

  // [datum]
  std::optional<Preset> preset;  // required
  double u0 = 1.0;               // vortex height
  double mass = 1.0;             // vortex / delta total mass
  std::optional<double> c0;      // delta location (default 0) or power-beta
                                 // support end (default 1)
  double rho1 = 0.0, m1 = 0.5;   // two-deltas
  double rho2 = 1.0, m2 = 0.5;
  double beta = 1.0;      // power-beta exponent
  bool normalize = true;  // power-beta: unit-mass scaling
  std::string samples_file;

  // [output]
  std::string output_dir = "out";
  std::vector<double> snapshot_times;
  bool shock_path = false;
  std::vector<double> levels;
  bool waiting_time_report = false;
  std::vector<double> convergence_grids;

  ModelParams model() const;
  InitialDatum make_datum() const;
  std::string datum_id() const;  // deterministic label for report rows
  bool wants_output() const;
};

// Parses config text, then applies overrides of the form "section.key=value"
// (a leading "--" is accepted). Overrides reuse the same key table and may
// replace file values.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides = {});

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides = {});

// Grid for the configured run: the stability-bound step from build_grid, or
// the explicit grid.h_t checked against that bound (ConfigError on violation,
// reporting the computed bound).
Grid resolve_grid(const RunConfig& config, const InitialDatum& datum);

}  // namespace aggmass
