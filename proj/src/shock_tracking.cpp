#include "aggmass/shock_tracking.hpp"

#include <algorithm>
#include <cmath>

#include "aggmass/errors.hpp"

namespace aggmass {

double rh_speed(double m_at_shock, double u_minus, double u_plus,
                const ModelParams& params) {
  if (m_at_shock < 0.0 || u_minus < 0.0 || u_plus < 0.0) {
    throw NumericError("rh_speed: states must be >= 0");
  }
  const double a = params.alpha;
  const double gap = u_plus - u_minus;
  if (std::abs(gap) <= 1e-12 * std::max({1.0, u_minus, u_plus})) {
    return m_at_shock * a * std::pow(u_minus, a - 1.0);
  }
  return m_at_shock * (std::pow(u_plus, a) - std::pow(u_minus, a)) / gap;
}

ShockPath integrate_front(const DensityField& u_left, double m_total,
                          double S0, double t_final, double dt,
                          const ModelParams& params, double t_start) {
  if (!(dt > 0.0) || t_start < 0.0 || t_final <= t_start) {
    throw NumericError("integrate_front: need 0 <= t_start < t_final, dt > 0");
  }
  const double expo = params.alpha - 1.0;
  auto speed = [&](double t, double s) {
    const double u = u_left(t, s);
    if (!std::isfinite(u) || u < 0.0) {
      throw NumericError("integrate_front: left state evaluation failed");
    }
    return m_total * std::pow(u, expo);
  };

  ShockPath path;
  path.kind = ShockKind::support_front;
  path.times.push_back(t_start);
  path.locations.push_back(S0);
  double t = t_start;
  double s = S0;
  while (t < t_final - 1e-15 * t_final) {
    const double h = std::min(dt, t_final - t);
    const double k1 = speed(t, s);
    const double k2 = speed(t + 0.5 * h, s + 0.5 * h * k1);
    const double k3 = speed(t + 0.5 * h, s + 0.5 * h * k2);
    const double k4 = speed(t + h, s + h * k3);
    s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    path.times.push_back(t);
    path.locations.push_back(s);
  }
  return path;
}

ShockPath extract_shock_from_trajectory(const Trajectory& traj,
                                        double level_fraction, double tol) {
  if (!(level_fraction > 0.0) || level_fraction > 1.0) {
    throw NumericError(
        "extract_shock_from_trajectory: level_fraction must lie in (0, 1]");
  }
  if (tol < 0.0) {
    throw NumericError("extract_shock_from_trajectory: tol must be >= 0");
  }
  const double total = traj.profiles.front().values.back();
  const double level = level_fraction * total - tol;

  ShockPath path;
  path.kind =
      level_fraction == 1.0 ? ShockKind::support_front : ShockKind::internal;
  path.degenerate = total <= 0.0;
  path.times.reserve(traj.profiles.size());
  path.locations.reserve(traj.profiles.size());
  for (const MassProfile& profile : traj.profiles) {
    double loc;
    if (level <= 0.0) {
      loc = 0.0;
    } else {
      loc = profile_crossing(profile.values, traj.grid.h_rho, level);
      if (loc < 0.0) {
        throw NumericError(
            "extract_shock_from_trajectory: level never reached inside the "
            "domain (domain too short or mass lost)");
      }
    }
    path.times.push_back(traj.grid.time(profile.time_index));
    path.locations.push_back(loc);
  }
  return path;
}

}  // namespace aggmass
