#pragma once

#include <optional>

#include "aggmass/core.hpp"

namespace aggmass {

// Sharp dichotomy for compactly supported data: the support edge c0 stays put
// for a positive time exactly when the mass deficit M - m0(rho) is controlled
// by (c0 - rho)^{alpha/(alpha-1)} as rho -> c0^-.

enum class WaitingTime { finite, infinite_limsup, inconclusive };

struct WaitingTimeVerdict {
  WaitingTime classification = WaitingTime::inconclusive;
  // Estimate of limsup (M - m0)/(c0 - rho)^{alpha/(alpha-1)}; infinity in the
  // diverging case. When finite it is the largest quotient seen on the mesh,
  // which is what the subsolution construction needs globally.
  double limsup_estimate = 0.0;
  std::optional<double> lower_bound_T;   // verified subsolution horizon
  std::optional<double> measured_onset;  // filled by callers with a trajectory
};

// Dyadic-mesh classification rho = c0 - c0 2^{-k}, k = 1..mesh, with an
// analytic fast path when the datum carries an edge descriptor. Requires
// alpha > 1 and M > 0.
WaitingTimeVerdict classify(const InitialDatum& datum,
                            const ModelParams& params, int mesh = 24);

// Horizon from coefficient matching alone:
//   T = ((alpha-1)/alpha)^{alpha-1} / (alpha M C^{alpha-1}).
double subsolution_horizon_formula(double C, double M,
                                   const ModelParams& params);

// Verified horizon: starts from the matching formula and shrinks by bisection
// until ansatz_mass(0, .) <= m0 holds on a fine mesh (uniform plus dyadic
// refinement toward c0). Throws NumericError if no T >= 1e-12 verifies.
double subsolution_horizon(double C, const InitialDatum& datum,
                           const ModelParams& params);

// First grid time at which the numerical front (mass level M - tol,
// interpolated) exceeds c0 + 2 h_rho; t_final when the support never moves
// within the run.
double measure_onset(const Trajectory& traj, double c0, double tol);

// Streaming variant that runs the scheme itself and stops at onset.
double measure_onset(const InitialDatum& datum, const Grid& grid,
                     const ModelParams& params, double c0, double tol);

// Upper bound from the two-point-mass barriers u_{k,0} = m0(rho_k) delta_0 +
// (M - m0(rho_k)) delta_{rho_k}: the time their second front passes
// c0 + (c0 - rho_k)/2, minimized over a mesh of rho_k increasing to c0.
double supersolution_upper_bound(const InitialDatum& datum,
                                 const ModelParams& params, int k_max = 24);

}  // namespace aggmass
