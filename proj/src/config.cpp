#include "aggmass/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "aggmass/errors.hpp"

namespace aggmass {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& value, const std::string& where) {
  const std::string v = trim(value);
  if (v.empty()) throw ConfigError(where + ": empty value");
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || !std::isfinite(x)) {
    throw ConfigError(where + ": malformed number '" + v + "'");
  }
  return x;
}

int parse_int(const std::string& value, const std::string& where) {
  const double x = parse_double(value, where);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) {
    throw ConfigError(where + ": expected an integer, got '" + trim(value) +
                      "'");
  }
  return i;
}

bool parse_bool(const std::string& value, const std::string& where) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& value,
                               const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_double(item, where));
  }
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

Preset parse_preset(const std::string& value, const std::string& where) {
  const std::string v = trim(value);
  if (v == "vortex") return Preset::vortex;
  if (v == "delta") return Preset::delta;
  if (v == "two-deltas") return Preset::two_deltas;
  if (v == "power-beta") return Preset::power_beta;
  if (v == "custom-samples") return Preset::custom_samples;
  throw ConfigError(where + ": unknown preset '" + v +
                    "' (expected vortex, delta, two-deltas, power-beta or "
                    "custom-samples)");
}

struct ParseState {
  RunConfig config;
  std::set<std::string> datum_keys_set;
  bool has_alpha = false, has_h_rho = false, has_t_final = false;
};

// One table drives both file keys and command-line overrides.
void apply(ParseState& st, const std::string& full_key,
           const std::string& value, const std::string& where) {
  RunConfig& c = st.config;
  if (full_key == "model.alpha") {
    c.alpha = parse_double(value, where);
    st.has_alpha = true;
  } else if (full_key == "model.dim") {
    c.dim = parse_int(value, where);
  } else if (full_key == "model.omega_d") {
    c.omega_d = parse_double(value, where);
  } else if (full_key == "grid.h_rho") {
    c.h_rho = parse_double(value, where);
    st.has_h_rho = true;
  } else if (full_key == "grid.t_final") {
    c.t_final = parse_double(value, where);
    st.has_t_final = true;
  } else if (full_key == "grid.domain_length") {
    c.domain_length = parse_double(value, where);
  } else if (full_key == "grid.h_t") {
    c.h_t = parse_double(value, where);
  } else if (full_key == "datum.preset") {
    c.preset = parse_preset(value, where);
  } else if (full_key == "datum.u0") {
    c.u0 = parse_double(value, where);
    st.datum_keys_set.insert("u0");
  } else if (full_key == "datum.mass") {
    c.mass = parse_double(value, where);
    st.datum_keys_set.insert("mass");
  } else if (full_key == "datum.c0") {
    c.c0 = parse_double(value, where);
    st.datum_keys_set.insert("c0");
  } else if (full_key == "datum.rho1") {
    c.rho1 = parse_double(value, where);
    st.datum_keys_set.insert("rho1");
  } else if (full_key == "datum.m1") {
    c.m1 = parse_double(value, where);
    st.datum_keys_set.insert("m1");
  } else if (full_key == "datum.rho2") {
    c.rho2 = parse_double(value, where);
    st.datum_keys_set.insert("rho2");
  } else if (full_key == "datum.m2") {
    c.m2 = parse_double(value, where);
    st.datum_keys_set.insert("m2");
  } else if (full_key == "datum.beta") {
    c.beta = parse_double(value, where);
    st.datum_keys_set.insert("beta");
  } else if (full_key == "datum.normalize") {
    c.normalize = parse_bool(value, where);
    st.datum_keys_set.insert("normalize");
  } else if (full_key == "datum.samples_file") {
    c.samples_file = trim(value);
    st.datum_keys_set.insert("samples_file");
  } else if (full_key == "output.dir") {
    c.output_dir = trim(value);
  } else if (full_key == "output.snapshots") {
    c.snapshot_times = parse_list(value, where);
  } else if (full_key == "output.shock_path") {
    c.shock_path = parse_bool(value, where);
  } else if (full_key == "output.levels") {
    c.levels = parse_list(value, where);
  } else if (full_key == "output.waiting_time_report") {
    c.waiting_time_report = parse_bool(value, where);
  } else if (full_key == "output.convergence_grids") {
    c.convergence_grids = parse_list(value, where);
  } else {
    throw ConfigError(where + ": unknown key '" + full_key + "'");
  }
}

const std::set<std::string>& allowed_datum_keys(Preset preset) {
  static const std::map<Preset, std::set<std::string>> table = {
      {Preset::vortex, {"u0", "mass"}},
      {Preset::delta, {"c0", "mass"}},
      {Preset::two_deltas, {"rho1", "m1", "rho2", "m2"}},
      {Preset::power_beta, {"beta", "c0", "normalize"}},
      {Preset::custom_samples, {"samples_file"}},
  };
  return table.at(preset);
}

void validate(const ParseState& st) {
  const RunConfig& c = st.config;
  if (!st.has_alpha) throw ConfigError("missing required key model.alpha");
  if (!st.has_h_rho) throw ConfigError("missing required key grid.h_rho");
  if (!st.has_t_final) throw ConfigError("missing required key grid.t_final");
  if (!c.preset.has_value()) {
    throw ConfigError("missing required key datum.preset");
  }
  if (c.alpha < 1.0) {
    std::ostringstream msg;
    msg << "model.alpha = " << c.alpha
        << " is outside the supported range: the solver covers the "
           "superlinear scope alpha >= 1 only";
    throw ConfigError(msg.str());
  }
  if (c.dim < 1) throw ConfigError("model.dim must be >= 1");
  if (c.omega_d && !(*c.omega_d > 0.0)) {
    throw ConfigError("model.omega_d must be > 0");
  }
  if (!(c.h_rho > 0.0)) throw ConfigError("grid.h_rho must be > 0");
  if (!(c.t_final > 0.0)) throw ConfigError("grid.t_final must be > 0");
  if (c.domain_length && !(*c.domain_length > 0.0)) {
    throw ConfigError("grid.domain_length must be > 0");
  }
  if (c.h_t && !(*c.h_t > 0.0)) throw ConfigError("grid.h_t must be > 0");

  const std::set<std::string>& allowed = allowed_datum_keys(*c.preset);
  for (const std::string& key : st.datum_keys_set) {
    if (allowed.count(key) == 0) {
      throw ConfigError("datum." + key + " is not used by preset '" +
                        preset_name(*c.preset) + "'");
    }
  }
  if (*c.preset == Preset::custom_samples && c.samples_file.empty()) {
    throw ConfigError("datum.samples_file is required for custom-samples");
  }

  for (double s : c.snapshot_times) {
    if (s < 0.0 || s > c.t_final * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "output.snapshots entry " << s << " must lie in [0, t_final = "
          << c.t_final << "]";
      throw ConfigError(msg.str());
    }
  }
  for (double level : c.levels) {
    if (level < 0.0) throw ConfigError("output.levels entries must be >= 0");
  }
  for (double h : c.convergence_grids) {
    if (!(h > 0.0)) {
      throw ConfigError("output.convergence_grids entries must be > 0");
    }
  }
}

}  // namespace

std::string preset_name(Preset preset) {
  switch (preset) {
    case Preset::vortex: return "vortex";
    case Preset::delta: return "delta";
    case Preset::two_deltas: return "two-deltas";
    case Preset::power_beta: return "power-beta";
    case Preset::custom_samples: return "custom-samples";
  }
  return "?";
}

RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides) {
  ParseState st;
  std::map<std::string, int> seen;  // full key -> first line number

  std::stringstream ss(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(where + ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "grid" && section != "datum" &&
          section != "output") {
        throw ConfigError(where + ": unknown section '" + section + "'");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key = value, got '" + line + "'");
    }
    if (section.empty()) {
      throw ConfigError(where + ": key outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    if (key.empty()) throw ConfigError(where + ": empty key");

    const std::string full_key = section + "." + key;
    auto [it, inserted] = seen.emplace(full_key, line_no);
    if (!inserted) {
      throw ConfigError(where + ": duplicate key '" + full_key +
                        "' (first set on line " + std::to_string(it->second) +
                        ")");
    }
    apply(st, full_key, value, where);
  }

  for (const std::string& override_raw : overrides) {
    std::string entry = override_raw;
    if (entry.rfind("--", 0) == 0) entry = entry.substr(2);
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos || entry.find('.') == std::string::npos ||
        entry.find('.') > eq) {
      throw ConfigError("override '" + override_raw +
                        "' must have the form section.key=value");
    }
    const std::string where = "override " + entry.substr(0, eq);
    apply(st, trim(entry.substr(0, eq)), entry.substr(eq + 1), where);
  }

  validate(st);
  return st.config;
}

RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading config file '" + path + "'");
  return parse_config(buf.str(), overrides);
}

ModelParams RunConfig::model() const {
  if (omega_d.has_value()) return {alpha, dim, *omega_d};
  return ModelParams(alpha, dim);
}

InitialDatum RunConfig::make_datum() const {
  switch (preset.value()) {
    case Preset::vortex: {
      if (!(u0 > 0.0) || !(mass > 0.0)) {
        throw ConfigError("vortex preset needs datum.u0 > 0 and datum.mass > 0");
      }
      return vortex_datum(u0, mass / u0);
    }
    case Preset::delta: {
      const double pos = c0.value_or(0.0);
      if (pos < 0.0 || !(mass > 0.0)) {
        throw ConfigError("delta preset needs datum.c0 >= 0 and datum.mass > 0");
      }
      return delta_datum(pos, mass);
    }
    case Preset::two_deltas: {
      if (rho1 < 0.0 || !(rho2 > rho1) || !(m1 > 0.0) || !(m2 > 0.0)) {
        throw ConfigError(
            "two-deltas preset needs 0 <= rho1 < rho2 and m1, m2 > 0");
      }
      return two_delta_datum(rho1, m1, rho2, m2);
    }
    case Preset::power_beta: {
      const double edge = c0.value_or(1.0);
      if (beta < 0.0 || !(edge > 0.0)) {
        throw ConfigError(
            "power-beta preset needs datum.beta >= 0 and datum.c0 > 0");
      }
      return power_edge_datum(beta, edge, normalize);
    }
    case Preset::custom_samples: {
      std::ifstream in(samples_file, std::ios::binary);
      if (!in) {
        throw IoError("cannot open samples file '" + samples_file + "'");
      }
      std::vector<double> samples;
      std::string raw;
      int line_no = 0;
      while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        samples.push_back(parse_double(
            line, samples_file + ":" + std::to_string(line_no)));
      }
      if (in.bad()) {
        throw IoError("failed reading samples file '" + samples_file + "'");
      }
      return sampled_datum(h_rho, std::move(samples));
    }
  }
  throw ConfigError("datum.preset not set");
}

std::string RunConfig::datum_id() const {
  std::ostringstream id;
  id << preset_name(preset.value());
  switch (preset.value()) {
    case Preset::vortex:
      id << " u0=" << u0 << " mass=" << mass;
      break;
    case Preset::delta:
      id << " c0=" << c0.value_or(0.0) << " mass=" << mass;
      break;
    case Preset::two_deltas:
      id << " rho1=" << rho1 << " m1=" << m1 << " rho2=" << rho2
         << " m2=" << m2;
      break;
    case Preset::power_beta:
      id << " beta=" << beta << " c0=" << c0.value_or(1.0)
         << " normalize=" << (normalize ? "true" : "false");
      break;
    case Preset::custom_samples:
      id << " file=" << samples_file;
      break;
  }
  return id.str();
}

bool RunConfig::wants_output() const {
  return !snapshot_times.empty() || shock_path || !levels.empty() ||
         waiting_time_report || !convergence_grids.empty();
}

Grid resolve_grid(const RunConfig& config, const InitialDatum& datum) {
  const ModelParams params = config.model();
  double domain;
  if (config.domain_length.has_value()) {
    domain = *config.domain_length;
  } else {
    const double support = std::max(datum.support_end, 0.0);
    domain = support +
             datum.total_mass *
                 std::pow(params.alpha * config.t_final, 1.0 / params.alpha) *
                 1.05 +
             5.0 * config.h_rho;
  }

  Grid grid = build_grid(datum, params, config.h_rho, config.t_final, domain);
  if (config.h_t.has_value()) {
    if (*config.h_t > grid.h_t * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "grid.h_t = " << *config.h_t
          << " violates the stability bound for this datum and h_rho; the "
             "largest stable step is "
          << grid.h_t;
      throw ConfigError(msg.str());
    }
    grid.h_t = *config.h_t;
    grid.n_time = std::max(
        1, static_cast<int>(std::ceil(config.t_final / grid.h_t - 1e-9)));
  }
  return grid;
}

}  // namespace aggmass
