#pragma once

#include <functional>
#include <vector>

#include "aggmass/core.hpp"
#include "aggmass/shock_tracking.hpp"

namespace aggmass {

// Long-time and convergence diagnostics: support-growth bounds, rescaled
// profiles, the Hamilton-Jacobi residual in the theta variable, grid
// refinement studies and level-set extraction.

struct SupportRatioRow {
  double t;
  double ratio;  // S(t)/(M (alpha t)^{1/alpha}) - 1
  double bound;  // S0/M * (alpha t)^{-1/alpha}
  bool within;   // -eps_grid <= ratio <= bound + eps_grid
};

// Checks 0 <= S(t)/(M (alpha t)^{1/alpha}) - 1 <= S0/M (alpha t)^{-1/alpha}
// up to the grid slack eps_grid = 2 h_rho/(M (alpha t)^{1/alpha}); pass
// h_rho = 0 for analytically integrated paths. Entries with t <= 0 are
// skipped.
std::vector<SupportRatioRow> support_ratio_check(const ShockPath& path,
                                                 double M, double S0,
                                                 double h_rho,
                                                 const ModelParams& params);

// sup over y in [eps, y_max] of |m(t, M (alpha t)^{1/alpha} y)/(M G(y)) - 1|,
// through the space-time interpolant. Throws when the rescaled window leaves
// the grid domain.
double rescaled_profile_error(const Trajectory& traj, double M, double t,
                              double eps, const ModelParams& params,
                              double y_max = 1.5);

// Same quantity for a single stored profile at time t (streaming runs).
double rescaled_profile_error(const std::vector<double>& mass,
                              const Grid& grid, double M, double t, double eps,
                              const ModelParams& params, double y_max = 1.5);

struct SpaceTimePoint {
  double t;
  double rho;
};

// Max residual of theta_t + ((alpha-1)/alpha)^{alpha-1} (theta_rho)_+^alpha
// with theta = m^{alpha/(alpha-1)}, by centered differences of the trajectory
// interpolant at steps (h_t, h_rho). Points near kinks (second difference
// above 10 h_rho L), near m = 0, or too close to the grid boundary are
// skipped; throws when no point is admissible. Requires alpha > 1.
double theta_residual(const Trajectory& traj, const ModelParams& params,
                      const std::vector<SpaceTimePoint>& sample_points);

// Same residual for an analytic mass function, differenced directly at the
// given steps; the caller picks smooth points.
double theta_residual(const std::function<double(double, double)>& mass,
                      const ModelParams& params,
                      const std::vector<SpaceTimePoint>& sample_points,
                      double dt, double drho);

struct ConvergenceResult {
  std::vector<double> h;       // coarsest first
  std::vector<double> errors;  // sup-node error against the oracle
  double fitted_order = 0.0;   // least-squares slope of log error vs log h
  double C = 0.0;              // calibrated at the coarsest grid
  bool within_bound = false;   // errors[i] <= C h[i]^{1/3} for all i
};

// Runs the scheme on each grid and compares the final profile against the
// oracle mass(t, rho) at the grid's own landing time >= t_check. Needs at
// least 3 grids.
ConvergenceResult convergence_study(
    const InitialDatum& datum,
    const std::function<double(double, double)>& oracle,
    const std::vector<double>& grids, double t_check, double domain_length,
    const ModelParams& params);

// Interpolated location where a profile crosses `level`; level 0 returns the
// left edge of the positivity set, and a level never reached inside the
// domain maps to the domain end.
double level_crossing(const std::vector<double>& values, double h_rho,
                      double level);

struct LevelSetGrid {
  std::vector<double> levels;
  std::vector<double> times;
  // crossings[i][n]: rho where profile n crosses levels[i]
  std::vector<std::vector<double>> crossings;
};

// Contour data for every stored time step. Levels must lie in [0, M].
LevelSetGrid level_set_grid(const Trajectory& traj,
                            const std::vector<double>& levels);

}  // namespace aggmass
