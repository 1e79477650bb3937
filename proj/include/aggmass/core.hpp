// core.hpp: shared domain types for the radial mass solver together with grid
// construction, initial-datum sampling and mass/density conversion.
//
// Everything works in the volume coordinate rho = d * omega_d * r^d, in which
// the cumulative mass m(t, rho) solves  m_t + m * (m_rho)^alpha = 0  with
// superlinear mobility exponent alpha >= 1. Initial data are nondecreasing
// mass functions assembled from a bounded density part plus point masses.
#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace aggmass {

// Volume of the unit ball in `dim` dimensions (pi^{d/2} / Gamma(d/2 + 1)).
double unit_ball_volume(int dim);

struct ModelParams {
  double alpha;    // mobility exponent, must be >= 1
  int dim;         // spatial dimension, used only by the self-similar profile
  double omega_d;  // ball volume constant of the coordinate change

  // omega_d is not pinned down by the usual conventions (ball volume vs.
  // surface constant); we expose it and default to the unit-ball volume.
  explicit ModelParams(double alpha, int dim = 1);
  ModelParams(double alpha, int dim, double omega_d);
};

struct PointMass {
  double rho;   // location in volume coordinate, >= 0
  double mass;  // > 0
};

// Power-law behaviour of the mass deficit at the support edge:
//   M - m0(rho) ~ amplitude * (c0 - rho)^exponent   as rho -> c0^-.
// Optional metadata consumed by the waiting-time classifier when the datum is
// known in closed form near the edge.
struct EdgeBehaviour {
  double amplitude;
  double exponent;
};

// Radial initial data. The induced mass function is
//   m0(rho) = integral_0^rho density + sum of point masses at or below rho,
// taken right-continuous at point-mass locations.
struct InitialDatum {
  std::function<double(double)> density;       // u0(rho); may be empty
  std::function<double(double)> density_mass;  // antiderivative of u0 if known
  std::vector<PointMass> deltas;
  double total_mass = 0.0;
  double lipschitz_bound = 0.0;  // upper bound for the density part of (m0)_rho
  double support_end = -1.0;     // c0 = max supp u0; negative when unknown
  std::optional<EdgeBehaviour> edge;

  double density_at(double rho) const;  // 0 when no density part
  double mass_at(double rho) const;     // m0(rho), right-continuous
};

// Ready-made data used by the experiments and the CLI presets.
InitialDatum vortex_datum(double height, double plateau);
InitialDatum delta_datum(double c0, double mass);
InitialDatum two_delta_datum(double rho1, double m1, double rho2, double m2);
// u0 = (beta+1)/c0 * (1 - rho/c0)_+^beta (unit mass) when normalize is true,
// the raw power u0 = (c0 - rho)_+^beta otherwise.
InitialDatum power_edge_datum(double beta, double c0 = 1.0,
                              bool normalize = true);
// Piecewise-linear mass function through the given node values at spacing h.
InitialDatum sampled_datum(double h, std::vector<double> mass_values);

struct Grid {
  double h_rho = 0.0;
  double h_t = 0.0;
  int n_space = 0;  // J: spatial nodes are rho_j = j * h_rho, j = 0..J
  int n_time = 0;   // N: time levels are t_n = n * h_t, n = 0..N
  bool trivial = false;         // zero-mass datum; h_t fell back to h_rho
  bool domain_warning = false;  // predicted support may leave the domain

  double rho(int j) const { return h_rho * j; }
  double time(int n) const { return h_t * n; }
  double length() const { return h_rho * n_space; }
  double t_final() const { return h_t * n_time; }
};

// Builds the space-time grid for a datum, applying the stability bound
//   h_t / h_rho <= 1 / (2 alpha L^{alpha-1} M)
// with equality. For point masses L is not finite; the builder uses the
// largest backward difference of the sampled initial profile instead, so the
// monotonicity guarantees hold on the grid actually used.
Grid build_grid(const InitialDatum& datum, const ModelParams& params,
                double h_rho, double t_final, double domain_length);

struct MassProfile {
  std::vector<double> values;  // M_j, j = 0..J, nondecreasing
  int time_index = 0;
};

// M_j^0 = m0(rho_j). Densities with a known antiderivative are integrated
// exactly; otherwise a composite trapezoid with 8 sub-points per cell keeps
// the sampling error below the scheme error.
MassProfile sample_initial_mass(const InitialDatum& datum, const Grid& grid);

// Backward differences U_j = (M_j - M_{j-1}) / h_rho with U_0 = 0.
std::vector<double> density_from_mass(const MassProfile& profile,
                                      const Grid& grid);

struct Trajectory {
  std::vector<MassProfile> profiles;  // n = 0..N
  Grid grid;
  ModelParams params;
  double cutoff = 0.0;  // frozen slope bound used by the scheme run

  const MassProfile& at(int n) const { return profiles.at(n); }
};

// Smallest interpolated rho at which the profile reaches `level`, or -1 when
// the level is never reached. Shared by the shock extractor, the waiting-time
// onset detector and the level-set exporter.
double profile_crossing(const std::vector<double>& values, double h_rho,
                        double level);

}  // namespace aggmass
