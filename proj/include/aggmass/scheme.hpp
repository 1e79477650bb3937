#pragma once

#include <functional>
#include <vector>

#include "aggmass/core.hpp"

namespace aggmass {

// Cut-off Hamiltonian H_L(s) = clamp(s, 0, L)^alpha. The cut-off keeps the
// update monotone in both stencil arguments under the CFL constraint.
double hamiltonian(double slope, double cutoff, const ModelParams& params);

// One cell of the upwind update:
//   next = prev / (1 + h_t * H_L((prev - left) / h_rho)).
double scheme_step_cell(double prev, double left, const Grid& grid,
                        double cutoff, const ModelParams& params);

// Largest backward difference quotient of a single profile; the scheme's
// slopes never exceed max(this at n=0, datum Lipschitz bound), so it is the
// natural cut-off when the datum has point masses.
double max_difference_quotient(const std::vector<double>& mass_values,
                               double h_rho);

// Per-step sup_j U_j^n for a stored trajectory; the sequence is nonincreasing
// for the monotone scheme.
std::vector<double> numerical_derivative_bound(const Trajectory& traj);

// Called after every step with the step index n >= 1 and the new profile.
// Return false to stop the run early.
using StepObserver =
    std::function<bool(int step, const std::vector<double>& mass)>;

// Runs the scheme without storing the history; the observer sees each new
// profile in turn. `cutoff < 0` selects sup of the initial difference
// quotients (capped below by the datum's Lipschitz bound). Throws
// NumericError if the grid violates the CFL bound for the chosen cutoff.
void run_scheme_observed(const std::vector<double>& initial, const Grid& grid,
                         const ModelParams& params, const StepObserver& observe,
                         bool parallel = true, double cutoff = -1.0);

// Full history variants. `run_scheme` uses the parallel kernel when the
// library is built with OpenMP; `run_scheme_serial` always uses the reference
// loop. Both produce bitwise identical trajectories.
Trajectory run_scheme(const InitialDatum& datum, const Grid& grid,
                      const ModelParams& params);
Trajectory run_scheme_serial(const InitialDatum& datum, const Grid& grid,
                             const ModelParams& params);

// Space-time interpolation of a stored trajectory. Each grid cell is split
// along its anti-diagonal; both triangles interpolate linearly and agree on
// the shared edge, so the surface is continuous. Arguments outside
// [0, rho_max] x [0, t_final] throw NumericError.
double interpolate(const Trajectory& traj, double t, double rho);

namespace detail {
void advance_serial(const std::vector<double>& prev, std::vector<double>& next,
                    const Grid& grid, double cutoff, const ModelParams& params);
void advance_parallel(const std::vector<double>& prev,
                      std::vector<double>& next, const Grid& grid,
                      double cutoff, const ModelParams& params);
}  // namespace detail

}  // namespace aggmass
