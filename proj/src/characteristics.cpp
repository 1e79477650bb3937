#include "aggmass/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aggmass/errors.hpp"
#include "aggmass/numerics.hpp"

namespace aggmass {

namespace {

// Largest |centered difference quotient| of u0^{alpha-1} on an equispaced
// grid of the given spacing; one-sided at the left end.
double max_quotient(const InitialDatum& datum, const ModelParams& params,
                    double length, double spacing) {
  const double expo = params.alpha - 1.0;
  auto g = [&](double rho) {
    return std::pow(datum.density_at(std::max(rho, 0.0)), expo);
  };
  double worst = 0.0;
  const int n = static_cast<int>(length / spacing);
  for (int i = 0; i <= n; ++i) {
    const double rho = i * spacing;
    double quotient;
    if (rho < spacing) {
      quotient = (g(rho + spacing) - g(rho)) / spacing;
    } else {
      quotient = (g(rho + spacing) - g(rho - spacing)) / (2.0 * spacing);
    }
    worst = std::max(worst, std::abs(quotient));
  }
  return worst;
}

}  // namespace

CharacteristicField make_characteristic_field(const InitialDatum& datum,
                                              const ModelParams& params,
                                              int probe_points,
                                              double probe_length) {
  if (!datum.deltas.empty()) {
    throw NumericError(
        "make_characteristic_field: characteristics need an absolutely "
        "continuous datum (no point masses)");
  }
  if (probe_points < 8) {
    throw NumericError("make_characteristic_field: too few probe points");
  }
  double length = probe_length;
  if (length <= 0.0) {
    length = datum.support_end > 0.0 ? datum.support_end : 1.0;
  }
  const double spacing = length / (probe_points - 1);

  CharacteristicField field{datum, 0.0, true, false, spacing};

  const double expo = params.alpha - 1.0;
  double prev_u = datum.density_at(0.0);
  for (int i = 1; i < probe_points; ++i) {
    const double u = datum.density_at(i * spacing);
    if (u < prev_u - 1e-14 * std::max(1.0, prev_u)) {
      field.nondecreasing = false;
      break;
    }
    prev_u = u;
  }

  // Refinement divergence test: a Lipschitz u0^{alpha-1} has quotients
  // converging to sup |g'|; a power-type singularity multiplies the largest
  // quotient by ~2^s per halving.
  const double q0 = max_quotient(datum, params, length, spacing);
  const double q1 = max_quotient(datum, params, length, spacing / 2.0);
  const double q2 = max_quotient(datum, params, length, spacing / 4.0);
  const double floor = 1e-12;
  if (q1 > 1.3 * std::max(q0, floor) && q2 > 1.3 * std::max(q1, floor)) {
    field.non_lipschitz = true;
  }

  double worst = 0.0;
  for (int i = 0; i < probe_points; ++i) {
    const double rho = i * spacing;
    const double u = datum.density_at(rho);
    double dg;
    if (i == 0) {
      dg = (std::pow(datum.density_at(spacing), expo) - std::pow(u, expo)) /
           spacing;
    } else {
      dg = (std::pow(datum.density_at(rho + spacing), expo) -
            std::pow(datum.density_at(rho - spacing), expo)) /
           (2.0 * spacing);
    }
    worst = std::max(worst, std::abs(std::pow(u, params.alpha) +
                                     datum.mass_at(rho) * dg));
  }
  field.lipschitz_L_char = worst;
  return field;
}

double characteristic_map(double rho0, double t,
                          const CharacteristicField& field,
                          const ModelParams& params) {
  if (rho0 < 0.0 || t < 0.0) {
    throw NumericError("characteristic_map: rho_0 and t must be >= 0");
  }
  const double u0 = field.datum.density_at(rho0);
  // pow(0, 0) = 1 covers alpha = 1, where the speed is m0 also outside the
  // support; for alpha > 1 the factor vanishes with u0.
  const double speed =
      params.alpha * field.datum.mass_at(rho0) * std::pow(u0, params.alpha - 1.0);
  return rho0 + speed * t;
}

Horizon classical_horizon(const CharacteristicField& field,
                          const ModelParams& params) {
  const double inf = std::numeric_limits<double>::infinity();
  if (field.nondecreasing) return {inf, false};
  if (field.non_lipschitz) return {0.0, true};
  if (field.lipschitz_L_char <= 0.0) return {inf, false};
  return {1.0 / (params.alpha * field.lipschitz_L_char), false};
}

CharacteristicValue solve_by_characteristics(double t, double rho,
                                             const CharacteristicField& field,
                                             const ModelParams& params) {
  if (t < 0.0 || rho < 0.0) {
    throw NumericError("solve_by_characteristics: t and rho must be >= 0");
  }
  const Horizon horizon = classical_horizon(field, params);
  if (t >= horizon.value && t > 0.0) {
    throw NumericError(
        "solve_by_characteristics: t is beyond the classical horizon");
  }
  if (t == 0.0 || rho == 0.0) {
    return {field.datum.density_at(rho), field.datum.mass_at(rho)};
  }
  auto shift = [&](double rho0) {
    return characteristic_map(rho0, t, field, params) - rho;
  };
  // P_t(0) = 0 and P_t(rho) >= rho, so the preimage lies in [0, rho].
  const double rho0 = bisect_increasing(shift, 0.0, rho, 1e-12);

  const double a = params.alpha;
  const double u0 = field.datum.density_at(rho0);
  CharacteristicValue out;
  if (u0 > 0.0) {
    out.u = std::pow(std::pow(u0, -a) + a * t, -1.0 / a);
  }
  out.m = field.datum.mass_at(rho0) *
          std::pow(1.0 + a * std::pow(u0, a) * t, 1.0 - 1.0 / a);
  return out;
}

}  // namespace aggmass
