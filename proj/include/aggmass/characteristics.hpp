#pragma once

#include "aggmass/core.hpp"

namespace aggmass {

// Classical short-time solver: transports the datum along the characteristic
// lines rho = rho_0 + alpha m0(rho_0) u0(rho_0)^{alpha-1} t until they cross.

struct CharacteristicField {
  InitialDatum datum;
  // sup_{rho_0} |u0^alpha + m0 d(u0^{alpha-1})/drho_0|, estimated by centered
  // differences on a uniform probe grid; finite only when u0^{alpha-1} is
  // Lipschitz.
  double lipschitz_L_char = 0.0;
  bool nondecreasing = false;   // u0 nondecreasing on the probe grid
  bool non_lipschitz = false;   // difference quotients diverge under refinement
  double probe_resolution = 0.0;
};

// Probes the datum on `probe_points` equispaced points covering the support
// (or [0, probe_length] when given). The divergence test refines the probe
// grid twice and flags non-Lipschitz behaviour when the largest quotient of
// u0^{alpha-1} keeps growing geometrically.
CharacteristicField make_characteristic_field(const InitialDatum& datum,
                                              const ModelParams& params,
                                              int probe_points = 100000,
                                              double probe_length = -1.0);

struct Horizon {
  double value = 0.0;     // +infinity when characteristics never cross
  bool crossing = false;  // characteristics cross for all t > 0
};

// P_t(rho_0); strictly increasing in rho_0 for t below the horizon.
double characteristic_map(double rho0, double t,
                          const CharacteristicField& field,
                          const ModelParams& params);

// 1/(alpha L_char). Infinite for nondecreasing u0 and for L_char = 0; zero
// with the crossing flag when u0^{alpha-1} is not Lipschitz.
Horizon classical_horizon(const CharacteristicField& field,
                          const ModelParams& params);

struct CharacteristicValue {
  double u = 0.0;
  double m = 0.0;
};

// Inverts P_t by bisection (absolute tolerance 1e-12 in rho_0) and returns
//   u = (u0(rho_0)^{-alpha} + alpha t)^{-1/alpha}   (0 where u0 vanishes),
//   m = m0(rho_0) (1 + alpha u0(rho_0)^alpha t)^{1 - 1/alpha}.
// Requires 0 <= t < classical_horizon.
CharacteristicValue solve_by_characteristics(double t, double rho,
                                             const CharacteristicField& field,
                                             const ModelParams& params);

}  // namespace aggmass
