#include "aggmass/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "aggmass/errors.hpp"

namespace aggmass {

double hamiltonian(double slope, double cutoff, const ModelParams& params) {
  const double s = std::clamp(slope, 0.0, cutoff);
  // pow is correctly rounded, so the integer fast paths return the same bits
  if (params.alpha == 2.0) return s * s;
  if (params.alpha == 1.0) return s;
  return std::pow(s, params.alpha);
}

double scheme_step_cell(double prev, double left, const Grid& grid,
                        double cutoff, const ModelParams& params) {
  // flat and decreasing cells divide by exactly 1.0, so skip the division;
  // profiles spend most of their nodes on plateaus
  if (prev <= left) return prev;
  const double slope = (prev - left) / grid.h_rho;
  return prev / (1.0 + grid.h_t * hamiltonian(slope, cutoff, params));
}

double max_difference_quotient(const std::vector<double>& mass_values,
                               double h_rho) {
  double bound = 0.0;
  for (std::size_t j = 1; j < mass_values.size(); ++j) {
    bound = std::max(bound, (mass_values[j] - mass_values[j - 1]) / h_rho);
  }
  return bound;
}

std::vector<double> numerical_derivative_bound(const Trajectory& traj) {
  std::vector<double> sup_u;
  sup_u.reserve(traj.profiles.size());
  for (const MassProfile& profile : traj.profiles) {
    sup_u.push_back(max_difference_quotient(profile.values, traj.grid.h_rho));
  }
  return sup_u;
}

namespace detail {

void advance_serial(const std::vector<double>& prev, std::vector<double>& next,
                    const Grid& grid, double cutoff,
                    const ModelParams& params) {
  next[0] = 0.0;
  const int J = static_cast<int>(prev.size()) - 1;
  for (int j = 1; j <= J; ++j) {
    next[j] = scheme_step_cell(prev[j], prev[j - 1], grid, cutoff, params);
  }
}

void advance_parallel(const std::vector<double>& prev,
                      std::vector<double>& next, const Grid& grid,
                      double cutoff, const ModelParams& params) {
  next[0] = 0.0;
  const int J = static_cast<int>(prev.size()) - 1;
#ifdef AGGMASS_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 1; j <= J; ++j) {
    next[j] = scheme_step_cell(prev[j], prev[j - 1], grid, cutoff, params);
  }
}

}  // namespace detail

namespace {

double resolve_cutoff(const std::vector<double>& initial, const Grid& grid,
                      double cutoff) {
  if (cutoff >= 0.0) return cutoff;
  return max_difference_quotient(initial, grid.h_rho);
}

void check_cfl(const std::vector<double>& initial, const Grid& grid,
               double cutoff, const ModelParams& params) {
  const double mass = initial.empty() ? 0.0 : initial.back();
  if (mass <= 0.0 || cutoff <= 0.0) return;  // nothing moves
  const double bound =
      grid.h_rho /
      (2.0 * params.alpha * std::pow(cutoff, params.alpha - 1.0) * mass);
  if (grid.h_t > bound * (1.0 + 1e-12)) {
    throw NumericError(
        "run_scheme_observed: time step violates the stability bound "
        "h_t <= h_rho / (2 alpha L^{alpha-1} M) for this cutoff");
  }
}

}  // namespace

void run_scheme_observed(const std::vector<double>& initial, const Grid& grid,
                         const ModelParams& params, const StepObserver& observe,
                         bool parallel, double cutoff) {
  if (initial.size() != static_cast<std::size_t>(grid.n_space + 1)) {
    throw NumericError("run_scheme_observed: initial profile size mismatch");
  }
  const double L = resolve_cutoff(initial, grid, cutoff);
  check_cfl(initial, grid, L, params);

  std::vector<double> prev = initial;
  std::vector<double> next(prev.size());
  for (int n = 1; n <= grid.n_time; ++n) {
    if (parallel) {
      detail::advance_parallel(prev, next, grid, L, params);
    } else {
      detail::advance_serial(prev, next, grid, L, params);
    }
    std::swap(prev, next);
    if (!observe(n, prev)) return;
  }
}

namespace {

Trajectory run_and_store(const InitialDatum& datum, const Grid& grid,
                         const ModelParams& params, bool parallel) {
  Trajectory traj{{}, grid, params, 0.0};
  std::vector<double> initial = sample_initial_mass(datum, grid).values;
  traj.cutoff = std::max(datum.lipschitz_bound,
                         max_difference_quotient(initial, grid.h_rho));
  traj.profiles.reserve(static_cast<std::size_t>(grid.n_time) + 1);
  traj.profiles.push_back({initial, 0});
  run_scheme_observed(
      initial, grid, params,
      [&](int n, const std::vector<double>& mass) {
        traj.profiles.push_back({mass, n});
        return true;
      },
      parallel, traj.cutoff);
  return traj;
}

}  // namespace

Trajectory run_scheme(const InitialDatum& datum, const Grid& grid,
                      const ModelParams& params) {
  return run_and_store(datum, grid, params, true);
}

Trajectory run_scheme_serial(const InitialDatum& datum, const Grid& grid,
                             const ModelParams& params) {
  return run_and_store(datum, grid, params, false);
}

double interpolate(const Trajectory& traj, double t, double rho) {
  const Grid& grid = traj.grid;
  const double rho_max = grid.h_rho * grid.n_space;
  const double t_max = grid.t_final();
  const double tol_rho = 1e-9 * grid.h_rho;
  const double tol_t = 1e-9 * grid.h_t;
  if (rho < -tol_rho || rho > rho_max + tol_rho || t < -tol_t ||
      t > t_max + tol_t) {
    throw NumericError("interpolate: point outside the computed domain");
  }
  rho = std::clamp(rho, 0.0, rho_max);
  t = std::clamp(t, 0.0, t_max);

  int j = std::min(static_cast<int>(rho / grid.h_rho), grid.n_space - 1);
  int n = std::min(static_cast<int>(t / grid.h_t), grid.n_time - 1);
  const double xi = rho / grid.h_rho - j;
  const double tau = t / grid.h_t - n;

  const std::vector<double>& lo = traj.at(n).values;
  const std::vector<double>& hi = traj.at(n + 1).values;
  if (xi + tau <= 1.0) {
    // lower-left triangle, anchored at (j, n)
    return lo[j] + xi * (lo[j + 1] - lo[j]) + tau * (hi[j] - lo[j]);
  }
  // upper-right triangle, anchored at (j+1, n+1)
  return hi[j + 1] - (1.0 - xi) * (hi[j + 1] - hi[j]) -
         (1.0 - tau) * (hi[j + 1] - lo[j + 1]);
}

}  // namespace aggmass
