#include "aggmass/explicit_solutions.hpp"

#include <algorithm>
#include <cmath>

#include "aggmass/errors.hpp"
#include "aggmass/numerics.hpp"

namespace aggmass {

namespace {

void require_superlinear(const ModelParams& params, const char* who) {
  if (!(params.alpha > 1.0)) {
    throw NumericError(std::string(who) +
                       ": requires alpha > 1 (exponent alpha/(alpha-1) is "
                       "singular at alpha = 1)");
  }
}

}  // namespace

VortexParams::VortexParams(double u0_, double total_mass_)
    : u0(u0_), total_mass(total_mass_), c0(u0_), plateau(total_mass_ / u0_) {
  if (!(u0 > 0.0) || !(total_mass > 0.0)) {
    throw NumericError("VortexParams: u0 and total_mass must be > 0");
  }
}

TwoDeltaParams::TwoDeltaParams(double rho1_, double m1_, double rho2_,
                               double m2_, const ModelParams& params)
    : m1(m1_), m2(m2_), rho1(rho1_), rho2(rho2_) {
  require_superlinear(params, "TwoDeltaParams");
  if (rho1 < 0.0 || !(rho2 > rho1) || !(m1 > 0.0) || !(m2 > 0.0)) {
    throw NumericError("TwoDeltaParams: need 0 <= rho1 < rho2, masses > 0");
  }
  const double a = params.alpha;
  t_valid = std::pow((rho2 - rho1) / m1, a / (a - 1.0)) / a;
}

double friendly_giant(double C, double t, const ModelParams& params) {
  if (C < 0.0 || t < 0.0) {
    throw NumericError("friendly_giant: C and t must be >= 0");
  }
  const double base = C + params.alpha * t;
  if (!(base > 0.0)) {
    throw NumericError("friendly_giant: diverges at C = t = 0");
  }
  return std::pow(base, -1.0 / params.alpha);
}

double self_similar_profile(double y, const ModelParams& params) {
  require_superlinear(params, "self_similar_profile");
  if (y < 0.0) throw NumericError("self_similar_profile: y must be >= 0");
  if (y == 0.0) return 0.0;
  const double a = params.alpha;
  const double core = params.omega_d * std::pow(y, params.dim) / a;
  const double inner = std::pow(core, -a / (a - 1.0));
  return std::pow(a + inner, -1.0 / a);
}

double vortex_density(double t, double rho, const VortexParams& vp,
                      const ModelParams& params) {
  if (t < 0.0 || rho < 0.0) {
    throw NumericError("vortex_density: t and rho must be >= 0");
  }
  const double a = params.alpha;
  const double height = std::pow(std::pow(vp.u0, -a) + a * t, -1.0 / a);
  return rho < vp.total_mass / height ? height : 0.0;
}

double vortex_mass(double t, double rho, const VortexParams& vp,
                   const ModelParams& params) {
  const double a = params.alpha;
  const double height = std::pow(std::pow(vp.c0, -a) + a * t, -1.0 / a);
  return std::min(height * rho, vp.c0 * vp.plateau);
}

double vortex_support(double t, const VortexParams& vp,
                      const ModelParams& params) {
  const double a = params.alpha;
  return vp.total_mass * std::pow(std::pow(vp.u0, -a) + a * t, 1.0 / a);
}

double ansatz_mass(double t, double rho, double M, double c0, double T,
                   const ModelParams& params) {
  require_superlinear(params, "ansatz_mass");
  if (!(M > 0.0) || !(T > 0.0)) {
    throw NumericError("ansatz_mass: M and T must be > 0");
  }
  if (t < 0.0 || t >= T) {
    throw NumericError("ansatz_mass: valid for 0 <= t < T only");
  }
  if (rho >= c0) return M;
  const double a = params.alpha;
  const double q = a / (a - 1.0);
  const double left = c0 - std::pow(a, 1.0 / a) * M * std::pow(T - t, 1.0 / a);
  if (rho <= left) return 0.0;
  const double inner =
      std::pow(M, q) - std::pow(a, -1.0 / (a - 1.0)) *
                           std::pow(c0 - rho, q) /
                           std::pow(T - t, 1.0 / (a - 1.0));
  if (inner <= 0.0) return 0.0;  // round-off just inside the left edge
  return std::pow(inner, (a - 1.0) / a);
}

double mass_profile_G(double y) { return std::clamp(y, 0.0, 1.0); }

double delta_mass_solution(double t, double rho, double M, double c0,
                           const ModelParams& params) {
  if (!(t > 0.0)) {
    throw NumericError(
        "delta_mass_solution: t must be > 0 (the datum is a step function; "
        "sample the initial mass directly)");
  }
  if (!(M > 0.0) || c0 < 0.0) {
    throw NumericError("delta_mass_solution: need M > 0 and c0 >= 0");
  }
  const double a = params.alpha;
  const double spread = M * std::pow(a * t, 1.0 / a);
  return M * mass_profile_G((rho - c0) / spread);
}

double kappa(double tau, const ModelParams& params) {
  require_superlinear(params, "kappa");
  if (tau < 0.0) throw NumericError("kappa: tau must be >= 0");
  if (tau == 0.0) return 0.0;
  const double a = params.alpha;
  const double q = a / (a - 1.0);
  auto f = [a, q](double s) {
    if (s <= 0.0) return 0.0;  // continuous extension at the endpoint
    return std::pow(std::pow(s, -q) + a, -1.0 / a);
  };
  return integrate_adaptive(f, 0.0, tau, 1e-12);
}

double kappa_inverse(double m, const ModelParams& params) {
  require_superlinear(params, "kappa_inverse");
  if (m < 0.0) throw NumericError("kappa_inverse: argument must be >= 0");
  if (m == 0.0) return 0.0;
  // K(tau) <= tau * alpha^{-1/alpha}, so tau >= m * alpha^{1/alpha} brackets
  // from below; double from there until K exceeds m.
  double hi = m * std::pow(params.alpha, 1.0 / params.alpha);
  while (kappa(hi, params) < m) hi *= 2.0;
  auto g = [&](double tau) { return kappa(tau, params) - m; };
  return bisect_increasing(g, 0.0, hi, 1e-10 * hi);
}

TwoDeltaValue two_deltas_solution(double t, double rho,
                                  const TwoDeltaParams& p,
                                  const ModelParams& params) {
  require_superlinear(params, "two_deltas_solution");
  if (!(t > 0.0) || t >= p.t_valid) {
    throw NumericError("two_deltas_solution: t must lie in (0, t_valid)");
  }
  const double a = params.alpha;
  const double s1 = p.rho1 + p.m1 * std::pow(a * t, (a - 1.0) / a);
  const double s2 = p.rho2 + a * p.m1 *
                                 kappa_inverse(p.m2 / (a * p.m1), params) *
                                 std::pow(t, 1.0 / a);
  double u = 0.0;
  if (rho >= p.rho1 && rho <= s1) {
    u = std::pow(a * t, -1.0 / a);
  } else if (rho >= p.rho2 && rho <= s2) {
    if (rho == p.rho2) {
      u = 0.0;  // rarefaction foot
    } else {
      const double core = (rho - p.rho2) / (a * p.m1 * t);
      u = std::pow(std::pow(core, -a / (a - 1.0)) + a * t, -1.0 / a);
    }
  }
  return {u, s1, s2};
}

double two_deltas_mass(double t, double rho, const TwoDeltaParams& p,
                       const ModelParams& params) {
  require_superlinear(params, "two_deltas_mass");
  if (!(t > 0.0) || t >= p.t_valid) {
    throw NumericError("two_deltas_mass: t must lie in (0, t_valid)");
  }
  const double a = params.alpha;
  if (rho <= p.rho1) return 0.0;
  if (rho < p.rho2) {
    // Linear ramp of slope (alpha t)^{-1/alpha} up to the first front, flat at
    // m1 between the fronts.
    return std::min(std::pow(a * t, -1.0 / a) * (rho - p.rho1), p.m1);
  }
  // Beyond rho2 the rarefaction integral is kappa in the scaled variable.
  const double scale = a * p.m1 * std::pow(t, 1.0 / a);
  const double mass =
      p.m1 + a * p.m1 * kappa((rho - p.rho2) / scale, params);
  return std::min(mass, p.m1 + p.m2);
}

double two_deltas_S2_by_ode(double t, const TwoDeltaParams& p,
                            const ModelParams& params, double sigma_step) {
  require_superlinear(params, "two_deltas_S2_by_ode");
  if (!(t > 0.0) || t >= p.t_valid) {
    throw NumericError("two_deltas_S2_by_ode: t must lie in (0, t_valid)");
  }
  if (!(sigma_step > 0.0)) {
    throw NumericError("two_deltas_S2_by_ode: step must be > 0");
  }
  const double a = params.alpha;
  const double msum = p.m1 + p.m2;

  // (r^q + alpha)^{-1/q} with q = alpha/(alpha-1). Factoring out r for r > 1
  // keeps r^q from overflowing near the singular corner, where r blows up
  // like 1/s but the factor itself just tends to 1/r.
  auto fan_factor = [&](double r) {
    const double q = a / (a - 1.0);
    if (r > 1.0) {
      return (1.0 / r) * std::pow(1.0 + a * std::pow(r, -q), -1.0 / q);
    }
    return std::pow(std::pow(r, q) + a, -1.0 / q);
  };

  // In sigma = t^{1/alpha} the front ODE reads
  //   dS2/dsigma = alpha (m1+m2) ((sigma alpha m1 / (S2-rho2))^{alpha/(alpha-1)} + alpha)^{-(alpha-1)/alpha},
  // bounded up to sigma = 0 where the 0/0 in the ratio is resolved by the
  // self-consistent initial slope s0 with S2 - rho2 ~ s0 sigma.
  auto rhs = [&](double sigma, double x) {
    // x = S2 - rho2 > 0 for sigma > 0
    return a * msum * fan_factor(sigma * a * p.m1 / x);
  };

  // s0 solves s0 = alpha (m1+m2) ((alpha m1/s0)^{alpha/(alpha-1)} + alpha)^{-(alpha-1)/alpha};
  // the right side is increasing in s0, so g(s0) = rhs0(s0) - s0 crosses zero
  // once on (0, alpha (m1+m2) alpha^{-(alpha-1)/alpha}].
  auto rhs0 = [&](double s) { return a * msum * fan_factor(a * p.m1 / s); };
  const double s_hi = a * msum * std::pow(a, -(a - 1.0) / a);
  auto g = [&](double s) { return s - rhs0(s); };
  const double s0 = bisect_increasing(g, 1e-300, s_hi * (1.0 + 1e-12),
                                      1e-14 * s_hi);

  const double sigma_final = std::pow(t, 1.0 / a);
  double sigma = std::min(sigma_step, 0.5 * sigma_final);
  double x = s0 * sigma;  // asymptotic start just off the singular corner
  while (sigma < sigma_final) {
    const double h = std::min(sigma_step, sigma_final - sigma);
    const double k1 = rhs(sigma, x);
    const double k2 = rhs(sigma + 0.5 * h, x + 0.5 * h * k1);
    const double k3 = rhs(sigma + 0.5 * h, x + 0.5 * h * k2);
    const double k4 = rhs(sigma + h, x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    sigma += h;
  }
  return p.rho2 + x;
}

}  // namespace aggmass
