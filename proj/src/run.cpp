#include "aggmass/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aggmass/csv.hpp"
#include "aggmass/diagnostics.hpp"
#include "aggmass/errors.hpp"
#include "aggmass/explicit_solutions.hpp"
#include "aggmass/scheme.hpp"
#include "aggmass/waiting_time.hpp"

namespace aggmass {

namespace {

namespace fs = std::filesystem;

fs::path ensure_output_dir(const RunConfig& config) {
  fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + config.output_dir +
                  "': " + ec.message());
  }
  return dir;
}

std::string numbered_name(const std::string& prefix, int index) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03d.csv", prefix.c_str(), index);
  return buf;
}

std::vector<std::string> base_metadata(const RunConfig& config,
                                       const Grid& grid) {
  return {
      "datum = " + config.datum_id(),
      "alpha = " + format_double(config.alpha),
      "h_rho = " + format_double(grid.h_rho),
      "h_t = " + format_double(grid.h_t),
  };
}

int snapshot_step(double t, const Grid& grid) {
  const int n = static_cast<int>(std::ceil(t / grid.h_t - 1e-9));
  return std::clamp(n, 0, grid.n_time);
}

std::string classification_name(WaitingTime c) {
  switch (c) {
    case WaitingTime::finite: return "finite";
    case WaitingTime::infinite_limsup: return "infinite-limsup";
    case WaitingTime::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string optional_cell(const std::optional<double>& v) {
  return v.has_value() ? format_double(*v) : "nan";
}

void write_waiting_report(const RunConfig& config, const fs::path& dir,
                          const WaitingTimeVerdict& verdict, double t_upper) {
  std::vector<std::string> row = {
      config.datum_id(),
      classification_name(verdict.classification),
      format_double(verdict.limsup_estimate),
      optional_cell(verdict.lower_bound_T),
      optional_cell(verdict.measured_onset),
      format_double(t_upper),
  };
  write_table((dir / "waiting_time.csv").string(),
              {"alpha = " + format_double(config.alpha)},
              "datum,classification,C,T_lower,onset,T_upper", {row});
}

// Fine-grid reference oracle for data without a closed form. Runs the scheme
// once at h_ref, keeping only the profiles at the reference steps nearest
// each study grid's landing time.
std::function<double(double, double)> make_reference_oracle(
    const InitialDatum& datum, const ModelParams& params,
    const std::vector<double>& study_grids, double t_check, double domain,
    double h_ref) {
  std::vector<double> landing_times;
  for (double h : study_grids) {
    const Grid g = build_grid(datum, params, h, t_check, domain);
    landing_times.push_back(g.t_final());
  }
  const double t_max =
      *std::max_element(landing_times.begin(), landing_times.end());

  const Grid ref = build_grid(datum, params, h_ref, t_max, domain);
  std::map<int, double> wanted;  // reference step -> landing time
  for (double t_land : landing_times) {
    const int n = std::clamp(static_cast<int>(std::lround(t_land / ref.h_t)),
                             0, ref.n_time);
    wanted.emplace(n, t_land);
  }

  auto stored = std::make_shared<std::map<double, std::vector<double>>>();
  const MassProfile initial = sample_initial_mass(datum, ref);
  if (auto it = wanted.find(0); it != wanted.end()) {
    (*stored)[it->second] = initial.values;
  }
  int last_wanted = wanted.empty() ? 0 : wanted.rbegin()->first;
  run_scheme_observed(
      initial.values, ref, params,
      [&](int step, const std::vector<double>& mass) {
        if (auto it = wanted.find(step); it != wanted.end()) {
          (*stored)[it->second] = mass;
        }
        return step < last_wanted;
      });

  const double h = ref.h_rho;
  return [stored, h](double t, double rho) {
    if (stored->empty()) throw NumericError("reference oracle has no data");
    // Nearest stored landing time; queries repeat the stored keys exactly.
    auto it = stored->lower_bound(t);
    if (it == stored->end()) {
      --it;
    } else if (it != stored->begin()) {
      auto prev = std::prev(it);
      if (t - prev->first < it->first - t) it = prev;
    }
    const std::vector<double>& values = it->second;
    const int last = static_cast<int>(values.size()) - 1;
    const double x = std::clamp(rho / h, 0.0, static_cast<double>(last));
    const int j = std::min(static_cast<int>(x), last - 1);
    const double xi = x - j;
    return values[j] + xi * (values[j + 1] - values[j]);
  };
}

std::function<double(double, double)> make_oracle(
    const RunConfig& config, const InitialDatum& datum,
    const ModelParams& params, const std::vector<double>& study_grids,
    double t_check, double domain) {
  switch (config.preset.value()) {
    case Preset::vortex: {
      const VortexParams vp(config.u0, config.mass);
      return [vp, params](double t, double rho) {
        return vortex_mass(t, rho, vp, params);
      };
    }
    case Preset::delta: {
      const double c0 = config.c0.value_or(0.0);
      const double mass = config.mass;
      return [c0, mass, params](double t, double rho) {
        return delta_mass_solution(t, rho, mass, c0, params);
      };
    }
    case Preset::two_deltas: {
      const TwoDeltaParams tp(config.rho1, config.m1, config.rho2, config.m2,
                              params);
      double t_land_max = 0.0;
      for (double h : study_grids) {
        const Grid g = build_grid(datum, params, h, t_check, domain);
        t_land_max = std::max(t_land_max, g.t_final());
      }
      if (t_land_max < tp.t_valid) {
        return [tp, params](double t, double rho) {
          return two_deltas_mass(t, rho, tp, params);
        };
      }
      break;  // post-merger: fall through to the reference run
    }
    case Preset::power_beta:
    case Preset::custom_samples:
      break;
  }
  const double h_ref =
      *std::min_element(study_grids.begin(), study_grids.end()) / 4.0;
  return make_reference_oracle(datum, params, study_grids, t_check, domain,
                               h_ref);
}

void emit_convergence(const RunConfig& config, const InitialDatum& datum,
                      const ModelParams& params, const fs::path& dir) {
  const double domain = resolve_grid(config, datum).length();
  const double t_check = config.t_final;
  const auto oracle = make_oracle(config, datum, params,
                                  config.convergence_grids, t_check, domain);
  const ConvergenceResult result = convergence_study(
      datum, oracle, config.convergence_grids, t_check, domain, params);

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < result.h.size(); ++i) {
    rows.push_back({format_double(result.h[i]), format_double(result.errors[i]),
                    format_double(result.C * std::cbrt(result.h[i]))});
  }
  write_table((dir / "convergence.csv").string(),
              {
                  "datum = " + config.datum_id(),
                  "alpha = " + format_double(config.alpha),
                  "t_check = " + format_double(t_check),
                  "fitted_order = " + format_double(result.fitted_order),
                  "C = " + format_double(result.C),
                  std::string("within_bound = ") +
                      (result.within_bound ? "true" : "false"),
              },
              "h,error,bound", rows);
}

}  // namespace

void run_simulation(const RunConfig& config) {
  if (!config.wants_output()) return;  // nothing requested, nothing written

  const ModelParams params = config.model();
  const InitialDatum datum = config.make_datum();
  const fs::path dir = ensure_output_dir(config);

  const bool stream = !config.snapshot_times.empty() || config.shock_path ||
                      !config.levels.empty() || config.waiting_time_report;
  WaitingTimeVerdict verdict;
  if (config.waiting_time_report) {
    verdict = classify(datum, params);  // cheap; fail before the long run
  }

  if (stream) {
    const Grid grid = resolve_grid(config, datum);
    const MassProfile initial = sample_initial_mass(datum, grid);
    const double total = initial.values.back();
    const double front_tol = 1e-4 * total;
    const double front_level = total - front_tol;

    for (double level : config.levels) {
      if (level < 0.0 || level > total * (1.0 + 1e-12)) {
        throw NumericError("requested level outside [0, total mass]");
      }
    }

    std::map<int, std::vector<int>> snapshots_at;  // step -> snapshot indices
    for (std::size_t i = 0; i < config.snapshot_times.size(); ++i) {
      snapshots_at[snapshot_step(config.snapshot_times[i], grid)].push_back(
          static_cast<int>(i));
    }

    std::vector<std::vector<std::string>> shock_rows;
    std::vector<std::vector<std::string>> level_rows;
    const double onset_threshold = datum.support_end + 2.0 * grid.h_rho;
    double onset = grid.t_final();
    bool onset_found = false;

    auto record = [&](int step, const std::vector<double>& mass) {
      const double t = grid.time(step);
      if (auto it = snapshots_at.find(step); it != snapshots_at.end()) {
        for (int index : it->second) {
          MassProfile profile{mass, step};
          write_snapshot(profile, t, grid, params,
                         (dir / numbered_name("snapshot", index)).string());
        }
      }
      if (config.shock_path) {
        const double front = profile_crossing(mass, grid.h_rho, front_level);
        if (front < 0.0) {
          throw NumericError("front level never reached inside the domain");
        }
        shock_rows.push_back({format_double(t), format_double(front)});
      }
      for (double level : config.levels) {
        level_rows.push_back(
            {format_double(t), format_double(level),
             format_double(level_crossing(mass, grid.h_rho, level))});
      }
      if (config.waiting_time_report && !onset_found) {
        const double front = profile_crossing(mass, grid.h_rho, front_level);
        if (front > onset_threshold) {
          onset = t;
          onset_found = true;
        }
      }
    };

    record(0, initial.values);
    run_scheme_observed(initial.values, grid, params,
                        [&](int step, const std::vector<double>& mass) {
                          record(step, mass);
                          return true;
                        });

    if (config.shock_path) {
      auto metadata = base_metadata(config, grid);
      metadata.push_back("front_level = " + format_double(front_level));
      write_table((dir / "shock_path.csv").string(), metadata, "t,S",
                  shock_rows);
    }
    if (!config.levels.empty()) {
      write_table((dir / "level_sets.csv").string(),
                  base_metadata(config, grid), "t,level,rho", level_rows);
    }
    if (config.waiting_time_report) {
      verdict.measured_onset = onset;
      double t_upper = std::nan("");
      try {
        t_upper = supersolution_upper_bound(datum, params);
      } catch (const NumericError&) {
        // no admissible barrier point for this datum; report nan
      }
      write_waiting_report(config, dir, verdict, t_upper);
    }
  }

  if (!config.convergence_grids.empty()) {
    emit_convergence(config, datum, params, dir);
  }
}

void run_exact(const RunConfig& config) {
  if (config.snapshot_times.empty()) {
    throw ConfigError("output.snapshots is required for the exact command");
  }
  const ModelParams params = config.model();
  const InitialDatum datum = config.make_datum();
  const Grid grid = resolve_grid(config, datum);

  std::function<double(double, double)> mass;
  switch (config.preset.value()) {
    case Preset::vortex: {
      const VortexParams vp(config.u0, config.mass);
      mass = [vp, params](double t, double rho) {
        return vortex_mass(t, rho, vp, params);
      };
      break;
    }
    case Preset::delta: {
      const double c0 = config.c0.value_or(0.0);
      const double total = config.mass;
      mass = [&datum, c0, total, params](double t, double rho) {
        if (t <= 0.0) return datum.mass_at(rho);
        return delta_mass_solution(t, rho, total, c0, params);
      };
      break;
    }
    case Preset::two_deltas: {
      const TwoDeltaParams tp(config.rho1, config.m1, config.rho2, config.m2,
                              params);
      mass = [&datum, tp, params](double t, double rho) {
        if (t <= 0.0) return datum.mass_at(rho);
        return two_deltas_mass(t, rho, tp, params);
      };
      break;
    }
    default:
      throw ConfigError("preset '" + preset_name(config.preset.value()) +
                        "' has no explicit solution; use the run command");
  }

  const fs::path dir = ensure_output_dir(config);
  for (std::size_t i = 0; i < config.snapshot_times.size(); ++i) {
    const double t = config.snapshot_times[i];
    MassProfile profile;
    profile.time_index = snapshot_step(t, grid);
    profile.values.resize(grid.n_space + 1);
    for (int j = 0; j <= grid.n_space; ++j) {
      profile.values[j] = mass(t, grid.rho(j));
    }
    write_snapshot(profile, t, grid, params,
                   (dir / numbered_name("exact", static_cast<int>(i))).string());
  }
}

void run_convergence(const RunConfig& config) {
  if (config.convergence_grids.size() < 3) {
    throw ConfigError(
        "output.convergence_grids needs at least 3 entries for the converge "
        "command");
  }
  const ModelParams params = config.model();
  const InitialDatum datum = config.make_datum();
  emit_convergence(config, datum, params, ensure_output_dir(config));
}

void run_waiting_time(const RunConfig& config) {
  const ModelParams params = config.model();
  const InitialDatum datum = config.make_datum();

  WaitingTimeVerdict verdict = classify(datum, params);
  const Grid grid = resolve_grid(config, datum);
  const double total = datum.total_mass;
  verdict.measured_onset =
      measure_onset(datum, grid, params, datum.support_end, 1e-4 * total);
  double t_upper = std::nan("");
  try {
    t_upper = supersolution_upper_bound(datum, params);
  } catch (const NumericError&) {
    // no admissible barrier point; report nan
  }
  write_waiting_report(config, ensure_output_dir(config), verdict, t_upper);
}

void run_level_sets(const RunConfig& config) {
  if (config.levels.empty()) {
    throw ConfigError("output.levels is required for the levelsets command");
  }
  RunConfig focused = config;
  focused.snapshot_times.clear();
  focused.shock_path = false;
  focused.waiting_time_report = false;
  focused.convergence_grids.clear();
  run_simulation(focused);
}

}  // namespace aggmass
