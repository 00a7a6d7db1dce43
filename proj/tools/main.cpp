#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Last-iterate dynamics and lower-bound experiments for monotone games"};
  app.require_subcommand(1);
  std::string config;
  std::string out = ".";
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "run OG, EG, GD or an SCLI and check the last-iterate bounds"},
      {"gap", "gradient and total gap per iterate"},
      {"potential", "backward construction of the adaptive potential"},
      {"scli-sweep", "spectral radius sweeps over the curvature window"},
      {"lowerbound", "hard-instance experiment for SCLI coefficients"},
      {"regret", "regret of EG and OG against the alternating adversary"},
      {"ratefit", "log-log slope of a series"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON experiment config")->required();
    sub->add_option("--out", out, "output directory");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : monoplay::cli::kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return monoplay::cli::run_command_file(command, config, out, std::cout, std::cerr);
}
