// explicit_solutions.hpp: closed-form and semi-explicit solutions of the mass
// equation, used as oracles, comparison barriers and asymptotic references.
#pragma once

#include "aggmass/core.hpp"

namespace aggmass {

// Plateau solution whose height decays like t^{-1/alpha} and whose support
// grows like t^{1/alpha}; the generic attractor.
struct VortexParams {
  double u0;          // initial plateau height
  double total_mass;  // M = u0 * plateau
  double c0;          // height constant of the mass form (equals u0)
  double plateau;     // initial support volume

  VortexParams(double u0, double total_mass);
};

// Pair of point masses m1 at rho1 and m2 at rho2, solved explicitly while the
// first front has not reached rho2.
struct TwoDeltaParams {
  double m1, m2;
  double rho1, rho2;
  double t_valid;  // (1/alpha) * ((rho2 - rho1)/m1)^{alpha/(alpha-1)}

  TwoDeltaParams(double rho1, double m1, double rho2, double m2,
                 const ModelParams& params);
};

// Spatially homogeneous upper barrier (C + alpha t)^{-1/alpha}.
double friendly_giant(double C, double t, const ModelParams& params);

// Self-similar density profile F(y) = (alpha + (omega_d y^d / alpha)^{-alpha/(alpha-1)})^{-1/alpha}.
// Requires alpha > 1.
double self_similar_profile(double y, const ModelParams& params);

double vortex_density(double t, double rho, const VortexParams& vp,
                      const ModelParams& params);
double vortex_mass(double t, double rho, const VortexParams& vp,
                   const ModelParams& params);
// Closed-form support front M (u0^{-alpha} + alpha t)^{1/alpha}.
double vortex_support(double t, const VortexParams& vp,
                      const ModelParams& params);

// Three-branch subsolution with waiting time T at the support edge c0:
// zero below c0 - alpha^{1/alpha} M (T-t)^{1/alpha}, the closed middle branch
//   (M^{alpha/(alpha-1)} - alpha^{-1/(alpha-1)} (c0-rho)_+^{alpha/(alpha-1)} / (T-t)^{1/(alpha-1)})^{(alpha-1)/alpha}
// in between, M for rho >= c0. Defined for 0 <= t < T; requires alpha > 1.
double ansatz_mass(double t, double rho, double M, double c0, double T,
                   const ModelParams& params);

// Ramp profile G(y) = clamp(y, 0, 1) entering the point-mass solution and the
// long-time rescaling.
double mass_profile_G(double y);

// Mass of the single point-mass solution M * G((rho - c0)/(M (alpha t)^{1/alpha})),
// valid for t > 0 only (the datum itself is a step function).
double delta_mass_solution(double t, double rho, double M, double c0,
                           const ModelParams& params);

// Scaling function K(tau) = integral_0^tau (s^{-alpha/(alpha-1)} + alpha)^{-1/alpha} ds
// and its inverse; alpha > 1. K is evaluated by adaptive quadrature (absolute
// tolerance 1e-12) and inverted by bisection (relative tolerance 1e-10).
double kappa(double tau, const ModelParams& params);
double kappa_inverse(double m, const ModelParams& params);

struct TwoDeltaValue {
  double density;
  double S1, S2;
};

// Density of the two-point-mass solution (five branches: zero, the plateau
// (alpha t)^{-1/alpha} on [rho1, S1], zero, the rarefaction on [rho2, S2],
// zero) together with both front locations. Valid for 0 < t < t_valid.
TwoDeltaValue two_deltas_solution(double t, double rho,
                                  const TwoDeltaParams& p,
                                  const ModelParams& params);

// Cumulative mass of the same solution (closed form through kappa).
double two_deltas_mass(double t, double rho, const TwoDeltaParams& p,
                       const ModelParams& params);

// Second front recomputed by integrating its front ODE in the desingularized
// variable sigma = t^{1/alpha} with a 4-stage explicit integrator; used to
// cross-validate the closed scaling form of S2.
double two_deltas_S2_by_ode(double t, const TwoDeltaParams& p,
                            const ModelParams& params,
                            double sigma_step = 1e-4);

}  // namespace aggmass
