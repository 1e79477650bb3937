#pragma once

#include <string>
#include <vector>

#include "aggmass/core.hpp"

namespace aggmass {

// All files are CSV, UTF-8, '\n' newlines, reals printed with 17 significant
// digits so that parse(write(x)) == x bitwise.

std::string format_double(double x);

struct Snapshot {
  double alpha = 0.0;
  double h_rho = 0.0;
  double h_t = 0.0;
  double t = 0.0;
  std::vector<double> rho;
  std::vector<double> m;
  std::vector<double> u;
};

// '#' metadata lines carrying alpha, h_rho, h_t, t; then "rho,m,u" rows.
// The u column is reconstructed from the mass profile. The time is passed
// explicitly because exact-solution snapshots land between scheme steps.
void write_snapshot(const MassProfile& profile, double t, const Grid& grid,
                    const ModelParams& params, const std::string& path);

Snapshot parse_snapshot(const std::string& path);

// Generic table writer for shock paths, level sets, reports and convergence
// studies: one '#' metadata line per entry, then a header row, then rows of
// pre-formatted cells.
void write_table(const std::string& path,
                 const std::vector<std::string>& metadata,
                 const std::string& header,
                 const std::vector<std::vector<std::string>>& rows);

}  // namespace aggmass
