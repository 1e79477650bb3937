#include "aggmass/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "aggmass/errors.hpp"
#include "aggmass/explicit_solutions.hpp"
#include "aggmass/numerics.hpp"
#include "aggmass/scheme.hpp"

namespace aggmass {

namespace {

double profile_value(const std::vector<double>& values, double h_rho,
                     double rho) {
  const int last = static_cast<int>(values.size()) - 1;
  const double clamped = std::clamp(rho, 0.0, h_rho * last);
  const int j = std::min(static_cast<int>(clamped / h_rho), last - 1);
  const double xi = clamped / h_rho - j;
  return values[j] + xi * (values[j + 1] - values[j]);
}

}  // namespace

std::vector<SupportRatioRow> support_ratio_check(const ShockPath& path,
                                                 double M, double S0,
                                                 double h_rho,
                                                 const ModelParams& params) {
  if (!(M > 0.0)) {
    throw NumericError("support_ratio_check: M must be > 0");
  }
  const double a = params.alpha;
  std::vector<SupportRatioRow> rows;
  rows.reserve(path.times.size());
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const double t = path.times[i];
    if (t <= 0.0) continue;
    const double scale = M * std::pow(a * t, 1.0 / a);
    const double ratio = path.locations[i] / scale - 1.0;
    const double bound = (S0 / M) * std::pow(a * t, -1.0 / a);
    const double eps_grid = 2.0 * h_rho / scale;
    SupportRatioRow row;
    row.t = t;
    row.ratio = ratio;
    row.bound = bound;
    row.within = ratio >= -eps_grid - 1e-12 && ratio <= bound + eps_grid + 1e-12;
    rows.push_back(row);
  }
  return rows;
}

namespace {

double rescaled_error_impl(const std::function<double(double)>& mass_of_rho,
                           double rho_max, double M, double t, double eps,
                           const ModelParams& params, double y_max) {
  if (!(t > 0.0) || !(eps > 0.0) || !(y_max > eps)) {
    throw NumericError("rescaled_profile_error: need t > 0, 0 < eps < y_max");
  }
  const double scale = M * std::pow(params.alpha * t, 1.0 / params.alpha);
  if (scale * y_max > rho_max * (1.0 + 1e-12)) {
    throw NumericError(
        "rescaled_profile_error: rescaled window exceeds the grid domain");
  }
  const int samples = 2000;
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double y = eps + (y_max - eps) * i / samples;
    const double reference = M * mass_profile_G(y);
    const double value = mass_of_rho(scale * y);
    worst = std::max(worst, std::abs(value / reference - 1.0));
  }
  return worst;
}

}  // namespace

double rescaled_profile_error(const Trajectory& traj, double M, double t,
                              double eps, const ModelParams& params,
                              double y_max) {
  auto mass_of_rho = [&](double rho) { return interpolate(traj, t, rho); };
  return rescaled_error_impl(mass_of_rho, traj.grid.length(), M, t, eps,
                             params, y_max);
}

double rescaled_profile_error(const std::vector<double>& mass,
                              const Grid& grid, double M, double t, double eps,
                              const ModelParams& params, double y_max) {
  auto mass_of_rho = [&](double rho) {
    return profile_value(mass, grid.h_rho, rho);
  };
  return rescaled_error_impl(mass_of_rho, grid.length(), M, t, eps, params,
                             y_max);
}

namespace {

double theta_residual_impl(const std::function<double(double, double)>& mass,
                           const ModelParams& params, double t, double rho,
                           double dt, double drho) {
  const double a = params.alpha;
  const double q = a / (a - 1.0);
  auto theta = [&](double tt, double rr) { return std::pow(mass(tt, rr), q); };
  const double theta_t = (theta(t + dt, rho) - theta(t - dt, rho)) / (2.0 * dt);
  const double theta_rho =
      (theta(t, rho + drho) - theta(t, rho - drho)) / (2.0 * drho);
  return theta_t + std::pow((a - 1.0) / a, a - 1.0) *
                       std::pow(std::max(theta_rho, 0.0), a);
}

}  // namespace

double theta_residual(const Trajectory& traj, const ModelParams& params,
                      const std::vector<SpaceTimePoint>& sample_points) {
  if (!(params.alpha > 1.0)) {
    throw NumericError("theta_residual: requires alpha > 1");
  }
  const Grid& grid = traj.grid;
  auto mass = [&](double t, double rho) { return interpolate(traj, t, rho); };
  double worst = -1.0;
  for (const SpaceTimePoint& pt : sample_points) {
    if (pt.t < grid.h_t || pt.t > grid.t_final() - grid.h_t) continue;
    if (pt.rho < grid.h_rho || pt.rho > grid.length() - grid.h_rho) continue;
    const double center = mass(pt.t, pt.rho);
    if (center < 1e-8) continue;
    const double second = mass(pt.t, pt.rho + grid.h_rho) - 2.0 * center +
                          mass(pt.t, pt.rho - grid.h_rho);
    if (std::abs(second) > 10.0 * grid.h_rho * traj.cutoff) {
      continue;
    }
    worst = std::max(worst, std::abs(theta_residual_impl(
                                mass, params, pt.t, pt.rho, grid.h_t,
                                grid.h_rho)));
  }
  if (worst < 0.0) {
    throw NumericError("theta_residual: no admissible sample point");
  }
  return worst;
}

double theta_residual(const std::function<double(double, double)>& mass,
                      const ModelParams& params,
                      const std::vector<SpaceTimePoint>& sample_points,
                      double dt, double drho) {
  if (!(params.alpha > 1.0)) {
    throw NumericError("theta_residual: requires alpha > 1");
  }
  if (sample_points.empty()) {
    throw NumericError("theta_residual: no admissible sample point");
  }
  double worst = 0.0;
  for (const SpaceTimePoint& pt : sample_points) {
    worst = std::max(worst, std::abs(theta_residual_impl(mass, params, pt.t,
                                                         pt.rho, dt, drho)));
  }
  return worst;
}

ConvergenceResult convergence_study(
    const InitialDatum& datum,
    const std::function<double(double, double)>& oracle,
    const std::vector<double>& grids, double t_check, double domain_length,
    const ModelParams& params) {
  if (grids.size() < 3) {
    throw NumericError("convergence_study: need at least 3 grids");
  }
  ConvergenceResult result;
  result.h = grids;
  std::sort(result.h.begin(), result.h.end(), std::greater<double>());

  std::vector<double> log_h, log_err;
  for (double h : result.h) {
    const Grid grid = build_grid(datum, params, h, t_check, domain_length);
    const std::vector<double> initial =
        sample_initial_mass(datum, grid).values;
    std::vector<double> final_profile = initial;
    run_scheme_observed(
        initial, grid, params,
        [&](int n, const std::vector<double>& values) {
          if (n == grid.n_time) final_profile = values;
          return true;
        },
        true,
        std::max(datum.lipschitz_bound,
                 max_difference_quotient(initial, grid.h_rho)));
    const double t_land = grid.t_final();
    double err = 0.0;
    for (int j = 0; j <= grid.n_space; ++j) {
      err = std::max(err, std::abs(oracle(t_land, grid.rho(j)) -
                                   final_profile[j]));
    }
    result.errors.push_back(err);
    log_h.push_back(std::log(h));
    log_err.push_back(std::log(std::max(err, 1e-300)));
  }

  result.C = result.errors.front() / std::cbrt(result.h.front());
  result.within_bound = true;
  for (std::size_t i = 0; i < result.h.size(); ++i) {
    if (result.errors[i] > result.C * std::cbrt(result.h[i]) * (1.0 + 1e-9)) {
      result.within_bound = false;
    }
  }
  result.fitted_order = ls_slope(log_h, log_err);
  return result;
}

double level_crossing(const std::vector<double>& values, double h_rho,
                      double level) {
  const double rho_max = h_rho * (values.size() - 1);
  if (level <= 0.0) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] > 0.0) {
        return h_rho * (j == 0 ? 0 : j - 1);
      }
    }
    return rho_max;
  }
  const double loc = profile_crossing(values, h_rho, level);
  return loc < 0.0 ? rho_max : loc;
}

LevelSetGrid level_set_grid(const Trajectory& traj,
                            const std::vector<double>& levels) {
  const double total = traj.profiles.front().values.back();
  for (double level : levels) {
    if (level < 0.0 || level > total * (1.0 + 1e-12)) {
      throw NumericError("level_set_grid: level outside [0, M]");
    }
  }
  LevelSetGrid out;
  out.levels = levels;
  out.times.reserve(traj.profiles.size());
  for (const MassProfile& profile : traj.profiles) {
    out.times.push_back(traj.grid.time(profile.time_index));
  }
  out.crossings.assign(levels.size(), {});
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out.crossings[i].reserve(traj.profiles.size());
    for (const MassProfile& profile : traj.profiles) {
      out.crossings[i].push_back(
          level_crossing(profile.values, traj.grid.h_rho, levels[i]));
    }
  }
  return out;
}

}  // namespace aggmass
