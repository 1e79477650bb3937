// End-to-end acceptance gate. Each criterion prints one PASS/FAIL line with
// the quantities it measured; the process exits nonzero if any line fails.
// argv[1] is the CLI binary, needed by the reproducibility criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aggmass/characteristics.hpp"
#include "aggmass/config.hpp"
#include "aggmass/core.hpp"
#include "aggmass/diagnostics.hpp"
#include "aggmass/errors.hpp"
#include "aggmass/explicit_solutions.hpp"
#include "aggmass/numerics.hpp"
#include "aggmass/scheme.hpp"
#include "aggmass/shock_tracking.hpp"
#include "aggmass/waiting_time.hpp"

namespace fs = std::filesystem;
using namespace aggmass;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run_criterion(int index, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [pass, detail] = body();
    report(index, name, pass, detail);
  } catch (const std::exception& e) {
    report(index, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// Streams a run, keeping only the profiles nearest the requested times.
std::map<double, std::vector<double>> capture_profiles(
    const InitialDatum& datum, const Grid& grid, const ModelParams& params,
    const std::vector<double>& times) {
  std::map<int, double> wanted;
  for (double t : times) {
    wanted[std::min(static_cast<int>(std::llround(t / grid.h_t)),
                    grid.n_time)] = t;
  }
  std::map<double, std::vector<double>> out;
  std::vector<double> initial = sample_initial_mass(datum, grid).values;
  if (wanted.count(0)) out[wanted[0]] = initial;
  const double slope = std::max(
      datum.lipschitz_bound, max_difference_quotient(initial, grid.h_rho));
  run_scheme_observed(initial, grid, params,
                      [&](int n, const std::vector<double>& values) {
                        auto it = wanted.find(n);
                        if (it != wanted.end()) out[it->second] = values;
                        return true;
                      },
                      true, slope);
  return out;
}

// Nondecreasing C1 density rising from a to b over [0, r], constant after.
InitialDatum rising_plateau_datum(double a, double b, double r, double cap) {
  InitialDatum d;
  const double pi = std::acos(-1.0);
  d.density = [=](double rho) {
    if (rho >= r) return b;
    return a + (b - a) * 0.5 * (1.0 - std::cos(pi * rho / r));
  };
  d.density_mass = [=](double rho) {
    const double m_r = (a + b) * 0.5 * r;
    if (rho >= r) return m_r + b * (rho - r);
    return a * rho + (b - a) * 0.5 * (rho - r / pi * std::sin(pi * rho / r));
  };
  d.total_mass = d.density_mass(cap);
  d.lipschitz_bound = b;
  d.support_end = std::numeric_limits<double>::infinity();
  return d;
}

// ---------------------------------------------------------------------------

std::pair<bool, std::string> criterion_convergence_rate(double* c_out) {
  const auto start = std::chrono::steady_clock::now();
  const ModelParams p(2.0);
  InitialDatum d = vortex_datum(1.0, 1.0);
  const VortexParams vp(1.0, 1.0);
  auto oracle = [&](double t, double rho) { return vortex_mass(t, rho, vp, p); };

  ConvergenceResult r =
      convergence_study(d, oracle, {4e-3, 2e-3, 1e-3, 5e-4}, 1.0, 1.9, p);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  *c_out = r.C;

  bool monotone = true;
  std::ostringstream errs;
  for (std::size_t i = 0; i < r.errors.size(); ++i) {
    if (i > 0 && r.errors[i] >= r.errors[i - 1]) monotone = false;
    errs << (i ? "," : "") << fmt(r.errors[i]);
  }
  const bool pass = monotone && r.within_bound &&
                    r.fitted_order >= 0.283 && seconds < 120.0;
  std::ostringstream detail;
  detail << "errors={" << errs.str() << "} monotone=" << monotone
         << " C=" << fmt(r.C) << " within_Ch^(1/3)=" << r.within_bound
         << " order=" << fmt(r.fitted_order) << " (>= 0.283) runtime="
         << fmt(seconds) << "s";
  return {pass, detail.str()};
}

std::pair<bool, std::string> criterion_scheme_invariants() {
  const ModelParams p(2.0);
  std::vector<std::pair<std::string, InitialDatum>> data;
  data.emplace_back("vortex", vortex_datum(1.0, 1.0));
  data.emplace_back("delta", delta_datum(0.25, 1.0));
  data.emplace_back("two-deltas", two_delta_datum(0.25, 0.5, 0.75, 0.5));
  data.emplace_back("power-beta-1", power_edge_datum(1.0, 1.0, false));
  data.emplace_back("power-beta-2", power_edge_datum(2.0, 1.0, true));

  long steps_checked = 0;
  for (auto& [label, d] : data) {
    for (double h : {2e-2, 1e-2, 5e-3}) {
      Grid g = build_grid(d, p, h, 0.2, 1.6);
      std::vector<double> prev = sample_initial_mass(d, g).values;
      const double m_sup = prev.back();
      const double slope =
          std::max(d.lipschitz_bound, max_difference_quotient(prev, g.h_rho));
      std::string violation;
      run_scheme_observed(
          prev, g, p,
          [&](int, const std::vector<double>& next) {
            double max_u_prev = 0.0, max_u_next = 0.0;
            for (std::size_t j = 0; j < next.size(); ++j) {
              if (next[j] > prev[j] || prev[j] > m_sup) {
                violation = "max principle";
                return false;
              }
              if (j > 0) {
                if (next[j] < next[j - 1]) {
                  violation = "monotonicity in rho";
                  return false;
                }
                max_u_prev = std::max(max_u_prev, prev[j] - prev[j - 1]);
                max_u_next = std::max(max_u_next, next[j] - next[j - 1]);
              }
            }
            if (std::memcmp(&next.back(), &prev.back(), sizeof(double)) != 0) {
              violation = "tail conservation (bitwise)";
              return false;
            }
            if (max_u_next > max_u_prev) {
              violation = "derivative decay";
              return false;
            }
            prev = next;
            ++steps_checked;
            return true;
          },
          true, slope);
      if (!violation.empty()) {
        return {false, label + " h=" + fmt(h) + " violated " + violation};
      }
    }
  }
  return {true, "5 data x 3 grids, " + std::to_string(steps_checked) +
                    " steps, all four invariants exact"};
}

std::pair<bool, std::string> criterion_comparison() {
  const ModelParams p(2.0);
  std::mt19937 rng(20240816u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Grid g;
  g.h_rho = 5e-3;
  g.n_space = 240;

  long comparisons = 0;
  for (int pair = 0; pair < 20; ++pair) {
    std::vector<double> a(g.n_space + 1, 0.0), b(g.n_space + 1, 0.0);
    for (int j = 1; j <= g.n_space; ++j) {
      const double x = unif(rng), y = unif(rng);
      a[j] = a[j - 1] + std::min(x, y) * 2.0 / g.n_space;
      b[j] = b[j - 1] + std::max(x, y) * 2.0 / g.n_space;
    }
    const double slope = std::max(max_difference_quotient(a, g.h_rho),
                                  max_difference_quotient(b, g.h_rho));
    g.h_t = g.h_rho / (2.0 * p.alpha * slope * b.back());  // shared CFL
    g.n_time = 400;

    std::vector<std::vector<double>> a_steps;
    a_steps.reserve(g.n_time);
    run_scheme_observed(a, g, p,
                        [&](int, const std::vector<double>& v) {
                          a_steps.push_back(v);
                          return true;
                        },
                        true, slope);
    int bad_pair = -1;
    run_scheme_observed(b, g, p,
                        [&](int n, const std::vector<double>& v) {
                          const std::vector<double>& va = a_steps[n - 1];
                          for (std::size_t j = 0; j < v.size(); ++j) {
                            ++comparisons;
                            if (va[j] > v[j]) {
                              bad_pair = pair;
                              return false;
                            }
                          }
                          return true;
                        },
                        true, slope);
    if (bad_pair >= 0) {
      return {false, "order lost in pair " + std::to_string(bad_pair)};
    }
  }
  return {true, "20 random ordered pairs, " + std::to_string(comparisons) +
                    " pointwise comparisons, M^A <= M^B exact"};
}

std::pair<bool, std::string> criterion_oracles() {
  const ModelParams p(2.0);
  const double h = 2e-3;
  // calibrated against measured sup errors (3.4e-4, 2.9e-3, 9.2e-3); the
  // cube-root envelope 0.2 h^(1/3) leaves less than a 3x margin
  const double sup_tol = 0.2 * std::cbrt(h);
  std::ostringstream detail;
  bool pass = true;

  {
    InitialDatum d = vortex_datum(1.0, 1.0);
    const VortexParams vp(1.0, 1.0);
    Grid g = build_grid(d, p, h, 0.5, 1.6);
    Trajectory traj = run_scheme(d, g, p);
    double worst = 0.0;
    const auto& last = traj.profiles.back().values;
    for (int j = 0; j <= g.n_space; ++j) {
      worst = std::max(worst, std::abs(last[j] - vortex_mass(g.t_final(),
                                                             g.rho(j), vp, p)));
    }
    pass = pass && worst <= sup_tol;
    detail << "vortex=" << fmt(worst);
  }
  {
    InitialDatum d = delta_datum(0.25, 1.0);
    Grid g = build_grid(d, p, h, 0.25, 1.4);
    Trajectory traj = run_scheme(d, g, p);
    double worst = 0.0;
    const auto& last = traj.profiles.back().values;
    for (int j = 0; j <= g.n_space; ++j) {
      worst = std::max(worst,
                       std::abs(last[j] - delta_mass_solution(
                                              g.t_final(), g.rho(j), 1.0,
                                              0.25, p)));
    }
    pass = pass && worst <= sup_tol;
    detail << " delta=" << fmt(worst);
  }

  const TwoDeltaParams tp(0.25, 0.5, 0.75, 0.5, p);
  {
    InitialDatum d = two_delta_datum(0.25, 0.5, 0.75, 0.5);
    Grid g = build_grid(d, p, h, tp.t_valid / 2.0, 2.2);
    Trajectory traj = run_scheme(d, g, p);
    double worst = 0.0;
    const auto& last = traj.profiles.back().values;
    for (int j = 0; j <= g.n_space; ++j) {
      worst = std::max(worst, std::abs(last[j] - two_deltas_mass(
                                                     g.t_final(), g.rho(j),
                                                     tp, p)));
    }
    pass = pass && worst <= sup_tol;
    detail << " two-deltas=" << fmt(worst) << " (sup tol " << fmt(sup_tol)
           << ")";
  }
  {
    // second lump keeps its mass: integral of u over [rho2, S2] = m2
    double worst = 0.0;
    for (double t : {0.125, 0.25}) {
      const TwoDeltaValue v = two_deltas_solution(t, 0.25, tp, p);
      const double integral = integrate_adaptive(
          [&](double rho) { return two_deltas_solution(t, rho, tp, p).density; },
          0.75, v.S2, 1e-10);
      worst = std::max(worst, std::abs(integral - 0.5));
    }
    pass = pass && worst <= 1e-8;
    detail << " mass-identity=" << fmt(worst) << " (tol 1e-8)";
  }
  {
    // scheme dominates the subsolution up to the 2 h L interpolation slack
    InitialDatum d = power_edge_datum(1.0, 1.0, true);
    Grid g = build_grid(d, p, h, 0.24, 1.2);
    Trajectory traj = run_scheme(d, g, p);
    const double slack = 2.0 * g.h_rho * traj.cutoff;
    double min_margin = std::numeric_limits<double>::infinity();
    for (double t : {0.06, 0.12, 0.18, 0.24}) {
      const double tt = std::min(t, g.t_final());
      for (int j = 0; j <= g.n_space; ++j) {
        const double margin = interpolate(traj, tt, g.rho(j)) -
                              ansatz_mass(tt, g.rho(j), 1.0, 1.0, 0.25, p) +
                              slack;
        min_margin = std::min(min_margin, margin);
      }
    }
    pass = pass && min_margin >= 0.0;
    detail << " ansatz-margin=" << fmt(min_margin) << " (>= 0 with 2hL slack)";
  }
  return {pass, detail.str()};
}

std::pair<bool, std::string> criterion_waiting_time() {
  const ModelParams p(2.0);
  bool pass = true;
  std::ostringstream detail;

  // analytic dichotomy flips at beta = 1 exactly
  const WaitingTime at_one =
      classify(power_edge_datum(1.0, 1.0, true), p).classification;
  const WaitingTime below =
      classify(power_edge_datum(1.0 - 1e-6, 1.0, true), p).classification;
  const bool flip = at_one == WaitingTime::finite &&
                    below == WaitingTime::infinite_limsup;
  pass = pass && flip;
  detail << "flip-at-beta-1=" << flip;

  double onset[2] = {0.0, 0.0};
  int k = 0;
  for (double beta : {1.0, 2.0}) {
    InitialDatum d = power_edge_datum(beta, 1.0, true);
    WaitingTimeVerdict v = classify(d, p);
    Grid g = build_grid(d, p, 1e-3, 1.0, 1.3);
    onset[k] = measure_onset(d, g, p, 1.0, 1e-3);
    const double lower = v.lower_bound_T.value_or(-1.0);
    const double upper = supersolution_upper_bound(d, p);
    const double grid_slack = 2.0 * g.h_t;
    const bool sandwich = v.classification == WaitingTime::finite &&
                          lower <= onset[k] + grid_slack &&
                          onset[k] <= upper + grid_slack;
    pass = pass && sandwich;
    detail << " beta=" << fmt(beta) << ":{lower=" << fmt(lower)
           << " onset=" << fmt(onset[k]) << " upper=" << fmt(upper)
           << " sandwich=" << sandwich << "}";
    ++k;
  }
  const bool ordered = 0.0 < onset[0] && onset[0] < onset[1];
  pass = pass && ordered;
  detail << " 0<onset(1)<onset(2)=" << ordered;
  return {pass, detail.str()};
}

std::pair<bool, std::string> criterion_asymptotics() {
  const ModelParams p(2.0);
  bool pass = true;
  std::ostringstream detail;

  for (int which = 0; which < 2; ++which) {
    InitialDatum d =
        which == 0 ? delta_datum(0.25, 1.0) : vortex_datum(1.0, 1.0);
    const double s0 = which == 0 ? 0.25 : 1.0;
    Grid g = build_grid(d, p, 0.05, 100.0, 21.5);
    auto profiles = capture_profiles(d, g, p, {1.0, 10.0, 100.0});

    bool in_band = true;
    double previous_err = std::numeric_limits<double>::infinity();
    bool err_nonincreasing = true;
    std::ostringstream errs;
    for (double t : {1.0, 10.0, 100.0}) {
      const std::vector<double>& m = profiles.at(t);
      const double scale = std::pow(p.alpha * t, 1.0 / p.alpha);  // M = 1
      const double s = level_crossing(m, g.h_rho, 1.0 - 1e-3);
      const double ratio = s / scale - 1.0;
      const double bound = s0 / scale;
      const double eps_grid = 2.0 * g.h_rho / scale;
      if (!(ratio >= -eps_grid && ratio <= bound + eps_grid)) in_band = false;

      const double err = rescaled_profile_error(m, g, 1.0, t, 0.1, p);
      if (err > previous_err) err_nonincreasing = false;
      previous_err = err;
      errs << (t > 1.0 ? "," : "") << fmt(err);
    }
    pass = pass && in_band && err_nonincreasing;
    detail << (which ? " vortex" : "delta") << ":{band=" << in_band
           << " rescaled={" << errs.str()
           << "} nonincreasing=" << err_nonincreasing << "}";
  }
  return {pass, detail.str()};
}

std::pair<bool, std::string> criterion_characteristics(double c_rate) {
  const ModelParams p(2.0);
  bool pass = true;
  std::ostringstream detail;

  {
    // u0 = (1 - rho)_+^{1/2}: u0^{alpha-1} is not Lipschitz, characteristics
    // cross immediately
    InitialDatum d = power_edge_datum(0.5, 1.0, false);
    CharacteristicField f = make_characteristic_field(d, p);
    Horizon h = classical_horizon(f, p);
    const bool immediate = h.value == 0.0 && h.crossing;
    pass = pass && immediate;
    detail << "crossing-datum:{horizon=" << fmt(h.value)
           << " crossing=" << h.crossing << "}";
  }
  {
    InitialDatum d = rising_plateau_datum(0.4, 1.0, 0.5, 1.5);
    CharacteristicField f = make_characteristic_field(d, p, 100000, 1.5);
    Horizon hor = classical_horizon(f, p);
    const bool forever = std::isinf(hor.value) && !hor.crossing;

    const double h = 2e-3;
    Grid g = build_grid(d, p, h, 0.1, 1.5);
    Trajectory traj = run_scheme(d, g, p);
    double worst = 0.0;
    for (int j = 1; g.rho(j) <= 1.2; ++j) {
      const CharacteristicValue cv = solve_by_characteristics(0.1, g.rho(j), f, p);
      worst = std::max(worst, std::abs(cv.m - interpolate(traj, 0.1, g.rho(j))));
    }
    const double tol = 2.0 * c_rate * std::cbrt(h);
    pass = pass && forever && worst <= tol;
    detail << " nondecreasing-C1:{horizon=inf:" << forever
           << " sup-diff=" << fmt(worst) << " tol=2Ch^(1/3)=" << fmt(tol)
           << "}";
  }
  return {pass, detail.str()};
}

std::pair<bool, std::string> criterion_reproducibility(const std::string& cli) {
  if (cli.empty()) {
    return {false, "CLI path missing (pass it as argv[1])"};
  }
  const fs::path work = fs::path("acceptance_tmp");
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path cfg = work / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "[model]\nalpha = 2\n"
        << "[grid]\nh_rho = 5e-3\nt_final = 0.3\n"
        << "[datum]\npreset = power-beta\nbeta = 1\nnormalize = false\n"
        << "[output]\nsnapshots = 0.1, 0.3\nshock_path = true\n"
        << "levels = 0.1, 0.25, 0.4\nwaiting_time_report = true\n";
  }

  for (const char* dir : {"a", "b"}) {
    const std::string cmd = cli + " run " + cfg.string() +
                            " --output.dir=" + (work / dir).string();
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      return {false, "CLI exited with status " + std::to_string(rc)};
    }
  }

  int files = 0;
  for (const auto& entry : fs::directory_iterator(work / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(work / "b" / entry.path().filename(), std::ios::binary);
    if (!fb) {
      return {false, entry.path().filename().string() + " missing in rerun"};
    }
    std::ostringstream ba, bb;
    ba << fa.rdbuf();
    bb << fb.rdbuf();
    if (ba.str() != bb.str()) {
      return {false, entry.path().filename().string() + " differs between runs"};
    }
  }
  fs::remove_all(work);
  if (files < 4) {
    return {false, "expected at least 4 output files, saw " +
                       std::to_string(files)};
  }
  return {true, std::to_string(files) +
                    " output files byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  double c_rate = 0.0;

  run_criterion(1, "convergence rate on vortex data",
                [&] { return criterion_convergence_rate(&c_rate); });
  run_criterion(2, "scheme structural invariants", criterion_scheme_invariants);
  run_criterion(3, "discrete comparison principle", criterion_comparison);
  run_criterion(4, "explicit-solution oracles", criterion_oracles);
  run_criterion(5, "waiting-time dichotomy", criterion_waiting_time);
  run_criterion(6, "long-time support and profile", criterion_asymptotics);
  run_criterion(7, "characteristics horizon",
                [&] { return criterion_characteristics(c_rate); });
  run_criterion(8, "byte-identical reruns",
                [&] { return criterion_reproducibility(cli); });

  if (g_failures > 0) {
    std::printf("%d of 8 criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all 8 criteria passed\n");
  return 0;
}
