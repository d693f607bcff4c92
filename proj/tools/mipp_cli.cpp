#include "mipp/config.hpp"
#include "mipp/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace {

struct FlagKey {
  const char* key;
  const char* help;
};

const FlagKey kFlagKeys[] = {
    {"a", "upper level for exit probabilities"},
    {"barrier_eps", "ruin allowed from the Monte Carlo survival barrier"},
    {"c", "premium rate"},
    {"delta", "exponential claim rate (single component)"},
    {"eps", "pmf truncation tolerance"},
    {"h", "grid step for scale functions"},
    {"horizon", "time horizon for simulate"},
    {"lambda", "intensity of every Poisson layer"},
    {"mixture", "claim mixture as weight:rate,..."},
    {"n", "number of iterated layers"},
    {"out", "output file (stdout when empty)"},
    {"paths", "Monte Carlo paths"},
    {"q", "killing rate of the scale function"},
    {"seed", "master seed"},
    {"sigma", "diffusion coefficient"},
    {"t", "time for pmf and moments"},
    {"theta", "Laplace arguments, comma separated"},
    {"threads", "worker threads, 0 for all cores"},
    {"tol", "series tolerance for scale functions"},
    {"x", "initial capitals, comma separated"},
    {"xmax", "grid length for scale functions"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated Poisson processes and the ruin of the associated risk model"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.option_defaults()->always_capture_default(false);

  std::string command;
  std::string config_path;
  bool print_config = false;
  bool mc = false;
  std::map<std::string, std::string> flag_values;

  app.add_option("command", command,
                 "pmf | moments | jumps | simulate | scale | ruin | exit | validate");
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");
  auto* mc_flag = app.add_flag("--mc", mc, "add Monte Carlo columns to the ruin table");
  for (const auto& [key, help] : kFlagKeys) {
    app.add_option(std::string("--") + key, flag_values[key], help)->type_name("VALUE");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mipp::kExitConfigError;
  }

  std::map<std::string, std::string> overrides;
  for (const auto& [key, help] : kFlagKeys) {
    if (app.get_option(std::string("--") + key)->count() > 0) overrides[key] = flag_values[key];
  }
  if (mc_flag->count() > 0) overrides["mc"] = mc ? "true" : "false";
  if (!command.empty()) overrides["command"] = command;

  std::string file_text;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "config error: config: cannot read " << config_path << "\n";
      return mipp::kExitConfigError;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    file_text = buf.str();
  }

  mipp::RunConfig config;
  try {
    config = mipp::parse_config(file_text, overrides);
  } catch (const mipp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return mipp::kExitConfigError;
  }

  if (print_config) {
    std::cout << mipp::print_config(config);
    return mipp::kExitOk;
  }
  return mipp::run(config, std::cout, std::cerr);
}
