#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aggmass/config.hpp"
#include "aggmass/core.hpp"
#include "aggmass/csv.hpp"
#include "aggmass/errors.hpp"
#include "doctest.h"

using namespace aggmass;

namespace {

const char* kMinimal =
    "[model]\n"
    "alpha = 2\n"
    "[grid]\n"
    "h_rho = 1e-3\n"
    "t_final = 1\n"
    "[datum]\n"
    "preset = vortex\n";

std::string temp_path(const std::string& name) {
  return "/tmp/aggmass-test-" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool bit_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  RunConfig c = parse_config(kMinimal);
  CHECK(c.alpha == 2.0);
  CHECK(c.dim == 1);
  CHECK_FALSE(c.omega_d.has_value());
  CHECK(c.h_rho == 1e-3);
  CHECK(c.t_final == 1.0);
  CHECK_FALSE(c.domain_length.has_value());
  CHECK_FALSE(c.h_t.has_value());
  CHECK(c.preset == Preset::vortex);
  CHECK(c.u0 == 1.0);
  CHECK(c.mass == 1.0);
  CHECK(c.output_dir == "out");
  CHECK(c.snapshot_times.empty());
  CHECK_FALSE(c.wants_output());
  CHECK(c.datum_id() == "vortex u0=1 mass=1");
  CHECK(c.model().alpha == 2.0);

  InitialDatum d = c.make_datum();
  CHECK(d.total_mass == doctest::Approx(1.0));
  CHECK(d.support_end == doctest::Approx(1.0));
}

TEST_CASE("comments, blank lines and inline comments are ignored") {
  RunConfig c = parse_config(
      "# run description\n"
      "\n"
      "[model]\n"
      "alpha = 2.5   # superlinear\n"
      "dim = 3\n"
      "omega_d = 12.566370614359172\n"
      "[grid]\n"
      "h_rho = 5e-3\n"
      "t_final = 2 # short\n"
      "domain_length = 4\n"
      "[datum]\n"
      "preset = two-deltas\n"
      "rho1 = 0.25\n"
      "m1 = 0.5\n"
      "rho2 = 0.75\n"
      "m2 = 0.5\n"
      "[output]\n"
      "dir = /tmp/somewhere\n"
      "snapshots = 0.5, 1, 2\n"
      "shock_path = yes\n"
      "levels = 0.25,0.5\n"
      "waiting_time_report = false\n"
      "convergence_grids = 1e-2,5e-3,2.5e-3\n");
  CHECK(c.alpha == 2.5);
  CHECK(c.dim == 3);
  CHECK(c.omega_d.value() == doctest::Approx(12.566370614359172));
  CHECK(c.domain_length.value() == 4.0);
  CHECK(c.preset == Preset::two_deltas);
  CHECK(c.rho1 == 0.25);
  CHECK(c.m2 == 0.5);
  CHECK(c.output_dir == "/tmp/somewhere");
  CHECK(c.snapshot_times == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(c.shock_path);
  CHECK(c.levels == std::vector<double>{0.25, 0.5});
  CHECK_FALSE(c.waiting_time_report);
  CHECK(c.convergence_grids.size() == 3);
  CHECK(c.wants_output());
  CHECK(c.datum_id() == "two-deltas rho1=0.25 m1=0.5 rho2=0.75 m2=0.5");
}

TEST_CASE("sublinear alpha is rejected with the scope message") {
  std::string text = kMinimal;
  const std::size_t pos = text.find("alpha = 2");
  text.replace(pos, 9, "alpha = 0.5");
  CHECK_THROWS_WITH_AS(
      parse_config(text),
      "model.alpha = 0.5 is outside the supported range: the solver covers "
      "the superlinear scope alpha >= 1 only",
      ConfigError);
  // alpha = 1 is inside the scope
  text.replace(text.find("alpha = 0.5"), 11, "alpha = 1");
  CHECK(parse_config(text).alpha == 1.0);
}

TEST_CASE("duplicate keys report the first assignment") {
  CHECK_THROWS_WITH_AS(parse_config("[model]\n"
                                    "alpha = 2\n"
                                    "alpha = 3\n"),
                       "line 3: duplicate key 'model.alpha' (first set on "
                       "line 2)",
                       ConfigError);
}

TEST_CASE("malformed content fails closed") {
  CHECK_THROWS_AS(parse_config("[solver]\nx = 1\n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[model]\nbeta = 1\n"),
                       "line 2: unknown key 'model.beta'", ConfigError);
  CHECK_THROWS_AS(parse_config("[model\nalpha = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha = 2\n"), ConfigError);  // no section
  CHECK_THROWS_AS(parse_config("[model]\nalpha\n"), ConfigError);  // no '='
  CHECK_THROWS_AS(parse_config("[model]\nalpha = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nalpha = 2\ndim = 1.5\n"),
                  ConfigError);

  std::string text = kMinimal;
  CHECK_THROWS_AS(parse_config(text + "[output]\nshock_path = maybe\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(text + "[output]\nsnapshots =\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(text + "[output]\nsnapshots = 0.5, 2\n"),
                  ConfigError);  // past t_final = 1
  CHECK_THROWS_AS(parse_config(text + "[output]\nlevels = -0.5\n"),
                  ConfigError);

  std::string preset_typo = text;
  preset_typo.replace(preset_typo.find("preset = vortex"), 15,
                      "preset = votex");
  try {
    parse_config(preset_typo);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unknown preset 'votex'") !=
          std::string::npos);
  }
}

TEST_CASE("missing required keys are named") {
  CHECK_THROWS_WITH_AS(
      parse_config("[grid]\nh_rho = 1e-3\nt_final = 1\n[datum]\npreset = "
                   "vortex\n"),
      "missing required key model.alpha", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config("[model]\nalpha = 2\n[grid]\nt_final = 1\n[datum]\npreset "
                   "= vortex\n"),
      "missing required key grid.h_rho", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config("[model]\nalpha = 2\n[grid]\nh_rho = 1e-3\n[datum]\npreset "
                   "= vortex\n"),
      "missing required key grid.t_final", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config("[model]\nalpha = 2\n[grid]\nh_rho = 1e-3\nt_final = 1\n"),
      "missing required key datum.preset", ConfigError);
}

TEST_CASE("datum keys are vetted against the chosen preset") {
  CHECK_THROWS_WITH_AS(parse_config(std::string(kMinimal) + "beta = 2\n"),
                       "datum.beta is not used by preset 'vortex'",
                       ConfigError);

  std::string delta = kMinimal;
  delta.replace(delta.find("preset = vortex"), 15, "preset = delta\nu0 = 2");
  CHECK_THROWS_WITH_AS(parse_config(delta),
                       "datum.u0 is not used by preset 'delta'", ConfigError);

  std::string power = kMinimal;
  power.replace(power.find("preset = vortex"), 15,
                "preset = power-beta\nmass = 2");
  CHECK_THROWS_WITH_AS(parse_config(power),
                       "datum.mass is not used by preset 'power-beta'",
                       ConfigError);
}

TEST_CASE("overrides share the key table and replace file values") {
  RunConfig c = parse_config(
      kMinimal, {"--grid.h_rho=2e-3", "datum.mass=3", "--output.shock_path=1"});
  CHECK(c.h_rho == 2e-3);
  CHECK(c.mass == 3.0);
  CHECK(c.shock_path);

  CHECK_THROWS_WITH_AS(parse_config(kMinimal, {"h_rho=1e-2"}),
                       "override 'h_rho=1e-2' must have the form "
                       "section.key=value",
                       ConfigError);
  CHECK_THROWS_AS(parse_config(kMinimal, {"--grid.h_rho"}), ConfigError);
  CHECK_THROWS_AS(parse_config(kMinimal, {"x=a.b"}), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(kMinimal, {"grid.bogus=1"}),
                       "override grid.bogus: unknown key 'grid.bogus'",
                       ConfigError);
  // overrides are validated like file values
  CHECK_THROWS_AS(parse_config(kMinimal, {"model.alpha=0.25"}), ConfigError);
  CHECK_THROWS_AS(parse_config(kMinimal, {"datum.beta=1"}), ConfigError);
}

TEST_CASE("preset constructors validate their parameters") {
  auto with = [](const std::string& datum_lines) {
    return parse_config(
        "[model]\nalpha = 2\n[grid]\nh_rho = 0.5\nt_final = 1\n[datum]\n" +
        datum_lines);
  };

  CHECK_THROWS_AS(with("preset = vortex\nu0 = -1\n").make_datum(),
                  ConfigError);
  CHECK_THROWS_AS(with("preset = delta\nc0 = -0.5\n").make_datum(),
                  ConfigError);
  CHECK_THROWS_AS(
      with("preset = two-deltas\nrho1 = 0.5\nrho2 = 0.25\n").make_datum(),
      ConfigError);
  CHECK_THROWS_AS(with("preset = power-beta\nc0 = 0\n").make_datum(),
                  ConfigError);
  CHECK_THROWS_WITH_AS(with("preset = custom-samples\n"),
                       "datum.samples_file is required for custom-samples",
                       ConfigError);
  CHECK_THROWS_AS(
      with("preset = custom-samples\nsamples_file = /nonexistent/samples\n")
          .make_datum(),
      IoError);

  const std::string samples = temp_path("samples.txt");
  {
    std::ofstream out(samples);
    out << "# node values\n0\n0.5 # halfway\n1.0\n1.0\n\n";
  }
  RunConfig c = with("preset = custom-samples\nsamples_file = " + samples +
                     "\n");
  InitialDatum d = c.make_datum();
  CHECK(d.total_mass == doctest::Approx(1.0));
  // the flat tail pins the support; without it the extent would be unknown
  CHECK(d.support_end == doctest::Approx(1.0));
  CHECK(d.lipschitz_bound == doctest::Approx(1.0));
  std::remove(samples.c_str());
}

TEST_CASE("resolve_grid auto-sizes the domain from the datum") {
  RunConfig c = parse_config(kMinimal, {"grid.h_rho=1e-2"});
  InitialDatum d = c.make_datum();
  Grid g = resolve_grid(c, d);
  // support end + 1.05 M (alpha t)^{1/alpha} + 5 h, rounded up to the mesh
  const double expected = 1.0 + 1.05 * std::sqrt(2.0) + 5e-2;
  CHECK(g.length() >= expected - 1e-12);
  CHECK(g.length() <= expected + g.h_rho);
  CHECK(g.h_rho == 1e-2);
  // stability bound for u0 = 1, M = 1, alpha = 2: h / (2 alpha L M)
  CHECK(g.h_t == doctest::Approx(1e-2 / 4.0));

  RunConfig fixed = parse_config(kMinimal, {"grid.domain_length=3"});
  Grid gf = resolve_grid(fixed, fixed.make_datum());
  CHECK(gf.length() == doctest::Approx(3.0));
}

TEST_CASE("explicit time steps are vetted against the stability bound") {
  RunConfig ok = parse_config(kMinimal,
                              {"grid.h_rho=1e-2", "grid.h_t=1.25e-3"});
  Grid g = resolve_grid(ok, ok.make_datum());
  CHECK(g.h_t == 1.25e-3);
  CHECK(g.n_time == 800);

  RunConfig bad = parse_config(kMinimal, {"grid.h_rho=1e-2", "grid.h_t=1e-2"});
  try {
    resolve_grid(bad, bad.make_datum());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("violates the stability bound") != std::string::npos);
    CHECK(msg.find("the largest stable step is 0.0025") != std::string::npos);
  }
}

TEST_CASE("format_double round-trips every value bitwise") {
  const std::vector<double> values = {0.0,
                                      1.0,
                                      0.1,
                                      1.0 / 3.0,
                                      std::acos(-1.0),
                                      6.02214076e23,
                                      1e-300,
                                      2.2250738585072014e-308,
                                      0.56250000003743206,
                                      -42.125};
  for (double x : values) {
    const std::string text = format_double(x);
    const double back = std::strtod(text.c_str(), nullptr);
    CHECK(bit_equal(back, x));
  }
  CHECK(format_double(1.0) == "1");
  CHECK(std::signbit(std::strtod(format_double(-0.0).c_str(), nullptr)));
}

TEST_CASE("snapshots round-trip bitwise through the file") {
  const ModelParams p(2.0);
  InitialDatum d = vortex_datum(1.0, 1.0);
  Grid g = build_grid(d, p, 0.25, 0.05, 1.75);
  MassProfile profile = sample_initial_mass(d, g);
  const std::string path = temp_path("snapshot.csv");

  write_snapshot(profile, 0.0, g, p, path);
  Snapshot snap = parse_snapshot(path);
  CHECK(bit_equal(snap.alpha, 2.0));
  CHECK(bit_equal(snap.h_rho, g.h_rho));
  CHECK(bit_equal(snap.h_t, g.h_t));
  CHECK(bit_equal(snap.t, 0.0));
  REQUIRE(snap.m.size() == profile.values.size());
  const std::vector<double> u = density_from_mass(profile, g);
  for (std::size_t j = 0; j < snap.m.size(); ++j) {
    CHECK(bit_equal(snap.rho[j], g.rho(static_cast<int>(j))));
    CHECK(bit_equal(snap.m[j], profile.values[j]));
    CHECK(bit_equal(snap.u[j], u[j]));
  }
  // the vortex ramp has unit density in the interior
  CHECK(snap.u[2] == 1.0);
  CHECK(snap.m.back() == 1.0);

  // an all-zero profile survives too
  MassProfile zero;
  zero.values.assign(profile.values.size(), 0.0);
  zero.time_index = 0;
  write_snapshot(zero, 0.125, g, p, path);
  Snapshot zsnap = parse_snapshot(path);
  CHECK(bit_equal(zsnap.t, 0.125));
  for (double v : zsnap.m) CHECK(v == 0.0);
  for (double v : zsnap.u) CHECK(v == 0.0);

  std::remove(path.c_str());
  CHECK_THROWS_AS(parse_snapshot(path), IoError);
}

TEST_CASE("parse_snapshot rejects structural damage") {
  const std::string path = temp_path("broken.csv");

  {
    std::ofstream out(path);
    out << "# alpha = 2\nrho,m\n";
  }
  CHECK_THROWS_AS(parse_snapshot(path), IoError);

  {
    std::ofstream out(path);
    out << "rho,m,u\n0,0\n";
  }
  CHECK_THROWS_AS(parse_snapshot(path), IoError);

  {
    std::ofstream out(path);
    out << "rho,m,u\n0,zero,0\n";
  }
  CHECK_THROWS_AS(parse_snapshot(path), IoError);

  {
    std::ofstream out(path);
    out << "rho,m,u\n0,0,0,0\n";
  }
  CHECK_THROWS_AS(parse_snapshot(path), IoError);

  std::remove(path.c_str());
}

TEST_CASE("write_table emits metadata, header and rows verbatim") {
  const std::string path = temp_path("table.csv");
  write_table(path, {"alpha = 2", "datum = vortex u0=1 mass=1"}, "t,S",
              {{format_double(0.5), format_double(1.25)},
               {format_double(1.0), format_double(1.5)}});
  CHECK(slurp(path) ==
        "# alpha = 2\n# datum = vortex u0=1 mass=1\nt,S\n0.5,1.25\n1,1.5\n");
  std::remove(path.c_str());

  CHECK_THROWS_AS(write_table("/nonexistent-dir/t.csv", {}, "x", {}),
                  IoError);
}

TEST_CASE("config files are read through the same parser") {
  const std::string path = temp_path("run.cfg");
  {
    std::ofstream out(path);
    out << kMinimal;
  }
  RunConfig c = parse_config_file(path, {"model.alpha=3"});
  CHECK(c.alpha == 3.0);
  std::remove(path.c_str());

  CHECK_THROWS_AS(parse_config_file(path), IoError);
}
