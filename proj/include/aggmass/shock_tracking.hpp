#pragma once

#include <functional>
#include <vector>

#include "aggmass/core.hpp"

namespace aggmass {

enum class ShockKind { support_front, internal };

struct ShockPath {
  std::vector<double> times;      // increasing
  std::vector<double> locations;  // S(t), nondecreasing
  ShockKind kind = ShockKind::support_front;
  bool degenerate = false;  // zero datum: the tracked level never leaves 0
};

// Rankine-Hugoniot speed m (u_+^alpha - u_-^alpha)/(u_+ - u_-); the equal
// case u_+ = u_- is defined by the limit alpha m u^{alpha-1}, which matches
// the characteristic speed.
double rh_speed(double m_at_shock, double u_minus, double u_plus,
                const ModelParams& params);

using DensityField = std::function<double(double t, double rho)>;

// Integrates the support-front ODE dS/dt = m_total * u_left(t, S)^{alpha-1}
// with classical RK4 at fixed step dt, from S(t_start) = S0 to t_final.
// t_start > 0 lets callers skip data whose left state is singular at t = 0
// (the rewritten two-delta front is handled by two_deltas_S2_by_ode instead).
ShockPath integrate_front(const DensityField& u_left, double m_total,
                          double S0, double t_final, double dt,
                          const ModelParams& params, double t_start = 0.0);

// Locates the numerical front in a stored trajectory: per time step, the
// smallest interpolated rho with m >= level_fraction * M - tol. Throws
// NumericError if the level is never reached inside the domain.
ShockPath extract_shock_from_trajectory(const Trajectory& traj,
                                        double level_fraction, double tol);

}  // namespace aggmass
