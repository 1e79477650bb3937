#include "aggmass/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <utility>

#include "aggmass/errors.hpp"
#include "aggmass/numerics.hpp"

namespace aggmass {

double unit_ball_volume(int dim) {
  if (dim < 1) throw NumericError("unit_ball_volume: dim must be >= 1");
  const double pi = 3.14159265358979323846;
  return std::pow(pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

ModelParams::ModelParams(double alpha_, int dim_)
    : ModelParams(alpha_, dim_, unit_ball_volume(dim_)) {}

ModelParams::ModelParams(double alpha_, int dim_, double omega)
    : alpha(alpha_), dim(dim_), omega_d(omega) {
  if (!(alpha >= 1.0)) {
    throw NumericError(
        "ModelParams: alpha must be >= 1 (the sublinear-mobility range "
        "0 < alpha < 1 is out of scope)");
  }
  if (dim < 1) throw NumericError("ModelParams: dim must be >= 1");
  if (!(omega_d > 0.0)) throw NumericError("ModelParams: omega_d must be > 0");
}

double InitialDatum::density_at(double rho) const {
  if (!density || rho < 0.0) return 0.0;
  return density(rho);
}

double InitialDatum::mass_at(double rho) const {
  if (rho < 0.0) return 0.0;
  double m = 0.0;
  if (density_mass) {
    m = density_mass(rho);
  } else if (density) {
    m = integrate_adaptive(density, 0.0, rho, 1e-12);
  }
  for (const PointMass& d : deltas) {
    if (d.rho <= rho) m += d.mass;
  }
  return m;
}

InitialDatum vortex_datum(double height, double plateau) {
  if (!(height > 0.0) || !(plateau > 0.0)) {
    throw NumericError("vortex_datum: height and plateau must be > 0");
  }
  InitialDatum d;
  d.density = [height, plateau](double rho) {
    return rho < plateau ? height : 0.0;
  };
  d.density_mass = [height, plateau](double rho) {
    return height * std::min(rho, plateau);
  };
  d.total_mass = height * plateau;
  d.lipschitz_bound = height;
  d.support_end = plateau;
  d.edge = EdgeBehaviour{height, 1.0};
  return d;
}

InitialDatum delta_datum(double c0, double mass) {
  if (c0 < 0.0 || !(mass > 0.0)) {
    throw NumericError("delta_datum: need c0 >= 0 and mass > 0");
  }
  InitialDatum d;
  d.deltas = {{c0, mass}};
  d.total_mass = mass;
  d.lipschitz_bound = 0.0;
  d.support_end = c0;
  d.edge = EdgeBehaviour{mass, 0.0};
  return d;
}

InitialDatum two_delta_datum(double rho1, double m1, double rho2, double m2) {
  if (rho1 < 0.0 || !(rho2 > rho1) || !(m1 > 0.0) || !(m2 > 0.0)) {
    throw NumericError("two_delta_datum: need 0 <= rho1 < rho2 and masses > 0");
  }
  InitialDatum d;
  d.deltas = {{rho1, m1}, {rho2, m2}};
  d.total_mass = m1 + m2;
  d.lipschitz_bound = 0.0;
  d.support_end = rho2;
  d.edge = EdgeBehaviour{m2, 0.0};
  return d;
}

InitialDatum power_edge_datum(double beta, double c0, bool normalize) {
  if (beta < 0.0 || !(c0 > 0.0)) {
    throw NumericError("power_edge_datum: need beta >= 0 and c0 > 0");
  }
  InitialDatum d;
  if (normalize) {
    d.density = [beta, c0](double rho) {
      return rho < c0 ? (beta + 1.0) / c0 * std::pow(1.0 - rho / c0, beta)
                      : 0.0;
    };
    d.density_mass = [beta, c0](double rho) {
      return rho < c0 ? 1.0 - std::pow(1.0 - rho / c0, beta + 1.0) : 1.0;
    };
    d.total_mass = 1.0;
    d.lipschitz_bound = (beta + 1.0) / c0;
    d.edge = EdgeBehaviour{std::pow(c0, -(beta + 1.0)), beta + 1.0};
  } else {
    const double mass = std::pow(c0, beta + 1.0) / (beta + 1.0);
    d.density = [beta, c0](double rho) {
      return rho < c0 ? std::pow(c0 - rho, beta) : 0.0;
    };
    d.density_mass = [beta, c0, mass](double rho) {
      return rho < c0
                 ? mass - std::pow(c0 - rho, beta + 1.0) / (beta + 1.0)
                 : mass;
    };
    d.total_mass = mass;
    d.lipschitz_bound = std::pow(c0, beta);
    d.edge = EdgeBehaviour{1.0 / (beta + 1.0), beta + 1.0};
  }
  d.support_end = c0;
  return d;
}

InitialDatum sampled_datum(double h, std::vector<double> mass_values) {
  if (!(h > 0.0) || mass_values.size() < 2) {
    throw NumericError("sampled_datum: need h > 0 and at least two samples");
  }
  for (std::size_t j = 1; j < mass_values.size(); ++j) {
    if (mass_values[j] < mass_values[j - 1]) {
      throw NumericError("sampled_datum: mass samples must be nondecreasing");
    }
  }
  if (mass_values.front() < 0.0) {
    throw NumericError("sampled_datum: mass samples must be nonnegative");
  }

  const auto values =
      std::make_shared<const std::vector<double>>(std::move(mass_values));
  const std::size_t last = values->size() - 1;

  InitialDatum d;
  d.density_mass = [values, h, last](double rho) {
    if (rho <= 0.0) return values->front();
    const double s = rho / h;
    if (s >= static_cast<double>(last)) return values->back();
    const auto j = static_cast<std::size_t>(s);
    const double frac = s - static_cast<double>(j);
    return (*values)[j] + frac * ((*values)[j + 1] - (*values)[j]);
  };
  d.density = [values, h, last](double rho) {
    if (rho < 0.0) return 0.0;
    const double s = rho / h;
    if (s >= static_cast<double>(last)) return 0.0;
    const auto j = static_cast<std::size_t>(s);
    return ((*values)[j + 1] - (*values)[j]) / h;
  };
  d.total_mass = values->back();

  double max_slope = 0.0;
  for (std::size_t j = 1; j < values->size(); ++j) {
    max_slope = std::max(max_slope, ((*values)[j] - (*values)[j - 1]) / h);
  }
  d.lipschitz_bound = max_slope;

  if (last >= 1 && (*values)[last] == (*values)[last - 1]) {
    std::size_t k = last;
    while (k > 0 && (*values)[k - 1] == values->back()) --k;
    d.support_end = h * static_cast<double>(k);
  }
  return d;
}

namespace {

// Node values M_j = m0(j h), j = 0..J, with point masses assigned wholly to
// the nearest node at or after their location (right-continuous sampling).
std::vector<double> sample_mass_values(const InitialDatum& datum, double h,
                                       int n_space) {
  std::vector<double> values(static_cast<std::size_t>(n_space) + 1, 0.0);

  if (datum.density_mass) {
    for (int j = 0; j <= n_space; ++j) {
      values[j] = datum.density_mass(h * j);
    }
  } else if (datum.density) {
    // Composite trapezoid, 8 sub-points per cell, accumulated left to right.
    double acc = 0.0;
    double f_left = datum.density(0.0);
    values[0] = 0.0;
    for (int j = 1; j <= n_space; ++j) {
      const double a = h * (j - 1);
      const double sub = h / 8.0;
      for (int k = 1; k <= 8; ++k) {
        const double f_right = datum.density(a + sub * k);
        acc += 0.5 * sub * (f_left + f_right);
        f_left = f_right;
      }
      values[j] = acc;
    }
  }

  for (const PointMass& d : datum.deltas) {
    const int node = static_cast<int>(std::ceil(d.rho / h - 1e-9));
    if (node > n_space) {
      throw NumericError("sample_initial_mass: point mass beyond the domain");
    }
    for (int j = std::max(node, 0); j <= n_space; ++j) values[j] += d.mass;
  }

  // Guard the nondecreasing invariant against quadrature round-off.
  for (int j = 1; j <= n_space; ++j) {
    values[j] = std::max(values[j], values[j - 1]);
  }
  return values;
}

}  // namespace

Grid build_grid(const InitialDatum& datum, const ModelParams& params,
                double h_rho, double t_final, double domain_length) {
  if (!(h_rho > 0.0) || !(t_final > 0.0) || !(domain_length > 0.0)) {
    throw NumericError("build_grid: h_rho, t_final, domain_length must be > 0");
  }

  Grid g;
  g.h_rho = h_rho;
  g.n_space = std::max(1, static_cast<int>(std::ceil(domain_length / h_rho - 1e-9)));

  const double mass = datum.total_mass;
  if (!(mass > 0.0)) {
    g.trivial = true;
    g.h_t = h_rho;
  } else {
    double slope = datum.lipschitz_bound;
    const std::vector<double> sampled =
        sample_mass_values(datum, h_rho, g.n_space);
    for (int j = 1; j <= g.n_space; ++j) {
      slope = std::max(slope, (sampled[j] - sampled[j - 1]) / h_rho);
    }
    const double denom =
        2.0 * params.alpha * std::pow(slope, params.alpha - 1.0) * mass;
    g.h_t = denom > 0.0 ? h_rho / denom : h_rho;
  }

  g.n_time = std::max(1, static_cast<int>(std::ceil(t_final / g.h_t - 1e-9)));

  if (datum.support_end >= 0.0 && mass > 0.0) {
    const double predicted =
        datum.support_end +
        mass * std::pow(params.alpha * g.t_final(), 1.0 / params.alpha);
    if (g.length() <= predicted) g.domain_warning = true;
  }
  return g;
}

MassProfile sample_initial_mass(const InitialDatum& datum, const Grid& grid) {
  MassProfile p;
  p.values = sample_mass_values(datum, grid.h_rho, grid.n_space);
  p.time_index = 0;
  return p;
}

std::vector<double> density_from_mass(const MassProfile& profile,
                                      const Grid& grid) {
  std::vector<double> u(profile.values.size(), 0.0);
  for (std::size_t j = 1; j < profile.values.size(); ++j) {
    u[j] = (profile.values[j] - profile.values[j - 1]) / grid.h_rho;
  }
  return u;
}

double profile_crossing(const std::vector<double>& values, double h_rho,
                        double level) {
  if (values.empty()) return -1.0;
  if (values[0] >= level) return 0.0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] >= level) {
      const double lo = values[j - 1];
      return h_rho * (static_cast<double>(j - 1) +
                      (level - lo) / (values[j] - lo));
    }
  }
  return -1.0;
}

}  // namespace aggmass
