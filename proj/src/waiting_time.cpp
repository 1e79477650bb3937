#include "aggmass/waiting_time.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "aggmass/errors.hpp"
#include "aggmass/explicit_solutions.hpp"
#include "aggmass/numerics.hpp"
#include "aggmass/scheme.hpp"

namespace aggmass {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_edge_data(const InitialDatum& datum, const ModelParams& params,
                       const char* who) {
  if (!(params.alpha > 1.0)) {
    throw NumericError(std::string(who) + ": requires alpha > 1");
  }
  if (!(datum.total_mass > 0.0)) {
    throw NumericError(std::string(who) + ": datum has no mass");
  }
  if (!(datum.support_end > 0.0)) {
    throw NumericError(std::string(who) + ": support edge c0 unknown");
  }
}

// Largest deficit quotient over the dyadic mesh (including k = 0, i.e.
// rho = 0); this is the global constant the subsolution needs.
double global_quotient(const InitialDatum& datum, double critical, int mesh) {
  const double c0 = datum.support_end;
  const double total = datum.total_mass;
  double worst = 0.0;
  for (int k = 0; k <= mesh; ++k) {
    const double w = c0 * std::pow(0.5, k);
    const double deficit = total - datum.mass_at(c0 - w);
    if (deficit <= 0.0) continue;
    worst = std::max(worst, deficit / std::pow(w, critical));
  }
  return worst;
}

}  // namespace

WaitingTimeVerdict classify(const InitialDatum& datum,
                            const ModelParams& params, int mesh) {
  require_edge_data(datum, params, "classify");
  if (mesh < 4) throw NumericError("classify: mesh too small");
  const double a = params.alpha;
  const double critical = a / (a - 1.0);

  WaitingTimeVerdict verdict;

  bool finite = false;
  bool decided = false;
  if (datum.edge.has_value()) {
    // Closed-form edge: M - m0 ~ A (c0 - rho)^p, so the quotient behaves like
    // A (c0 - rho)^{p - critical}.
    if (datum.edge->exponent >= critical - 1e-12) {
      finite = true;
      decided = true;
    } else {
      verdict.classification = WaitingTime::infinite_limsup;
      verdict.limsup_estimate = kInf;
      return verdict;
    }
  }

  if (!decided) {
    const double c0 = datum.support_end;
    const double total = datum.total_mass;
    std::vector<double> ks, logs, quotients;
    bool hit_zero_deficit = false;
    for (int k = 1; k <= mesh; ++k) {
      const double w = c0 * std::pow(0.5, k);
      const double deficit = total - datum.mass_at(c0 - w);
      if (deficit <= 0.0) {
        hit_zero_deficit = true;
        break;
      }
      const double q = deficit / std::pow(w, critical);
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log2(q));
      quotients.push_back(q);
    }

    if (hit_zero_deficit || quotients.empty()) {
      finite = true;  // deficit vanishes identically toward the edge
    } else {
      const double slope = ls_slope(ks, logs);
      if (slope > 0.05) {
        verdict.classification = WaitingTime::infinite_limsup;
        verdict.limsup_estimate = kInf;
        return verdict;
      }
      if (slope < -0.05) {
        finite = true;
      } else {
        bool monotone_down = true;
        for (std::size_t i = 1; i < quotients.size(); ++i) {
          if (quotients[i] > quotients[i - 1] * (1.0 + 1e-9)) {
            monotone_down = false;
            break;
          }
        }
        if (monotone_down) {
          finite = true;
        } else {
          verdict.classification = WaitingTime::inconclusive;
          verdict.limsup_estimate =
              quotients.empty() ? 0.0
                                : *std::max_element(quotients.begin(),
                                                    quotients.end());
          return verdict;
        }
      }
    }
  }

  if (finite) {
    verdict.classification = WaitingTime::finite;
    verdict.limsup_estimate = global_quotient(datum, critical, mesh);
    const double c_for_t =
        std::max(verdict.limsup_estimate, std::numeric_limits<double>::min());
    verdict.lower_bound_T = subsolution_horizon(c_for_t, datum, params);
  }
  return verdict;
}

double subsolution_horizon_formula(double C, double M,
                                   const ModelParams& params) {
  if (!(params.alpha > 1.0)) {
    throw NumericError("subsolution_horizon_formula: requires alpha > 1");
  }
  if (!(C > 0.0) || !(M > 0.0)) {
    throw NumericError("subsolution_horizon_formula: C and M must be > 0");
  }
  const double a = params.alpha;
  return std::pow((a - 1.0) / a, a - 1.0) /
         (a * M * std::pow(C, a - 1.0));
}

namespace {

// m(0, .; T) <= m0 checked on a uniform mesh of the active window plus dyadic
// refinement toward the edge, where the comparison is tightest.
bool horizon_verifies(double T, const InitialDatum& datum,
                      const ModelParams& params) {
  const double c0 = datum.support_end;
  const double total = datum.total_mass;
  const double a = params.alpha;
  const double window =
      std::min(c0, std::pow(a, 1.0 / a) * total * std::pow(T, 1.0 / a));
  const double slack = 1e-12 * total;
  const int uniform = 2000;
  for (int i = 1; i < uniform; ++i) {
    const double rho = c0 - window * i / uniform;
    if (ansatz_mass(0.0, rho, total, c0, T, params) >
        datum.mass_at(rho) + slack) {
      return false;
    }
  }
  for (int k = 1; k <= 40; ++k) {
    const double rho = c0 - window * std::pow(0.5, k);
    if (ansatz_mass(0.0, rho, total, c0, T, params) >
        datum.mass_at(rho) + slack) {
      return false;
    }
  }
  return true;
}

}  // namespace

double subsolution_horizon(double C, const InitialDatum& datum,
                           const ModelParams& params) {
  require_edge_data(datum, params, "subsolution_horizon");
  const double start = subsolution_horizon_formula(C, datum.total_mass, params);
  if (horizon_verifies(start, datum, params)) return start;

  double lo = start;
  while (!(lo <= 1e-12)) {
    lo *= 0.5;
    if (horizon_verifies(lo, datum, params)) break;
  }
  if (lo <= 1e-12 && !horizon_verifies(lo, datum, params)) {
    throw NumericError(
        "subsolution_horizon: no horizon down to 1e-12 keeps the barrier "
        "below the datum");
  }
  // The barrier grows with T, so "verifies" is monotone; tighten the bracket
  // and return the verified end.
  double hi = 2.0 * lo;
  for (int it = 0; it < 60 && (hi - lo) > 1e-6 * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (horizon_verifies(mid, datum, params)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double measure_onset(const Trajectory& traj, double c0, double tol) {
  const Grid& grid = traj.grid;
  if (c0 < 0.0 || c0 > grid.length()) {
    throw NumericError("measure_onset: c0 lies outside the domain");
  }
  const double total = traj.profiles.front().values.back();
  const double level = total - tol;
  const double threshold = c0 + 2.0 * grid.h_rho;
  for (const MassProfile& profile : traj.profiles) {
    const double front = profile_crossing(profile.values, grid.h_rho, level);
    if (front < 0.0) {
      throw NumericError("measure_onset: front level never reached");
    }
    if (front > threshold) return grid.time(profile.time_index);
  }
  return grid.t_final();
}

double measure_onset(const InitialDatum& datum, const Grid& grid,
                     const ModelParams& params, double c0, double tol) {
  if (c0 < 0.0 || c0 > grid.length()) {
    throw NumericError("measure_onset: c0 lies outside the domain");
  }
  const std::vector<double> initial = sample_initial_mass(datum, grid).values;
  const double level = initial.back() - tol;
  const double threshold = c0 + 2.0 * grid.h_rho;

  auto moved = [&](const std::vector<double>& values) {
    const double front = profile_crossing(values, grid.h_rho, level);
    if (front < 0.0) {
      throw NumericError("measure_onset: front level never reached");
    }
    return front > threshold;
  };

  if (moved(initial)) return 0.0;
  double onset = grid.t_final();
  bool found = false;
  run_scheme_observed(
      initial, grid, params,
      [&](int n, const std::vector<double>& values) {
        if (moved(values)) {
          onset = grid.time(n);
          found = true;
          return false;
        }
        return true;
      },
      true,
      std::max(datum.lipschitz_bound,
               max_difference_quotient(initial, grid.h_rho)));
  return found ? onset : grid.t_final();
}

double supersolution_upper_bound(const InitialDatum& datum,
                                 const ModelParams& params, int k_max) {
  require_edge_data(datum, params, "supersolution_upper_bound");
  const double a = params.alpha;
  const double c0 = datum.support_end;
  const double total = datum.total_mass;

  std::vector<double> probes;
  const int uniform = 64;
  for (int j = 1; j < uniform; ++j) {
    probes.push_back(c0 * j / uniform);
  }
  for (int k = 1; k <= k_max; ++k) {
    probes.push_back(c0 * (1.0 - std::pow(0.5, k)));
  }

  double best = kInf;
  for (double rho_k : probes) {
    const double m1 = datum.mass_at(rho_k);
    const double m2 = total - m1;
    if (m1 <= 0.0 || m2 <= 0.0) continue;
    const double front_rate =
        a * m1 * kappa_inverse(m2 / (a * m1), params);  // S2 = rho_k + rate t^{1/alpha}
    const double target = 1.5 * (c0 - rho_k);
    best = std::min(best, std::pow(target / front_rate, a));
  }
  if (!std::isfinite(best)) {
    throw NumericError(
        "supersolution_upper_bound: no admissible barrier point (datum mass "
        "vanishes inside the support?)");
  }
  return best;
}

}  // namespace aggmass
