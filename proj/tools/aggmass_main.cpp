#include <exception>
#include <memory>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aggmass/config.hpp"
#include "aggmass/errors.hpp"
#include "aggmass/run.hpp"

namespace {

// CLI11 stores a pointer to the bound string, so each subcommand's state
// needs a stable address for the lifetime of the app.
struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_path;
  void (*body)(const aggmass::RunConfig&) = nullptr;
};

Subcommand* make_subcommand(CLI::App& app,
                            std::vector<std::unique_ptr<Subcommand>>& subs,
                            const std::string& name,
                            const std::string& description,
                            void (*body)(const aggmass::RunConfig&)) {
  subs.push_back(std::make_unique<Subcommand>());
  Subcommand* sub = subs.back().get();
  sub->app = app.add_subcommand(name, description);
  sub->app->add_option("config", sub->config_path, "path to a config file")
      ->required();
  sub->app->allow_extras();  // --section.key=value overrides
  sub->body = body;
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "aggmass: monotone finite-difference solver for the radial mass "
      "formulation of aggregation with Newtonian repulsion and superlinear "
      "mobility"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Subcommand>> subs;
  make_subcommand(app, subs, "run",
                  "run the scheme and emit the configured outputs",
                  &aggmass::run_simulation);
  make_subcommand(app, subs, "exact",
                  "evaluate the preset's explicit solution at the snapshot "
                  "times",
                  &aggmass::run_exact);
  make_subcommand(app, subs, "converge",
                  "grid-refinement study against an oracle",
                  &aggmass::run_convergence);
  make_subcommand(app, subs, "waiting-time",
                  "classify the datum and measure the onset",
                  &aggmass::run_waiting_time);
  make_subcommand(app, subs, "levelsets",
                  "level-crossing curves for the configured levels",
                  &aggmass::run_level_sets);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  }

  for (const std::unique_ptr<Subcommand>& sub : subs) {
    if (!sub->app->parsed()) continue;
    try {
      const aggmass::RunConfig config =
          aggmass::parse_config_file(sub->config_path, sub->app->remaining());
      sub->body(config);
      return 0;
    } catch (const aggmass::ConfigError& e) {
      std::cerr << "error: config: " << e.what() << '\n';
      return 2;
    } catch (const aggmass::IoError& e) {
      std::cerr << "error: io: " << e.what() << '\n';
      return 4;
    } catch (const aggmass::NumericError& e) {
      std::cerr << "error: numeric: " << e.what() << '\n';
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: internal: " << e.what() << '\n';
      return 3;
    }
  }
  std::cerr << "error: config: no subcommand selected\n";
  return 2;
}
