#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "skewless/cli.hpp"
#include "skewless/scenarios.hpp"

namespace {

struct Flags {
  std::string config;
  std::string preset;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<long> steps;
  int wheel_k = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "YAML configuration file");
  cmd->add_option("--preset", f.preset, "Built-in scenario name");
}

skewless::Config resolve(const Flags& f) {
  if (!f.config.empty() && !f.preset.empty()) {
    throw std::invalid_argument("--config and --preset are mutually exclusive");
  }
  skewless::Config cfg;
  if (!f.config.empty()) {
    cfg = skewless::load_config(f.config);
  } else if (!f.preset.empty()) {
    cfg.scenario = skewless::preset_scenario(f.preset, f.wheel_k);
  } else {
    throw std::invalid_argument("one of --config or --preset is required");
  }
  if (f.seed) cfg.scenario.noise.seed = *f.seed;
  if (f.steps) {
    cfg.scenario.steps = *f.steps;
    cfg.scenario.validate();
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skewless clock synchronization: analysis, simulation and tuning"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* analyze = app.add_subcommand("analyze", "Stability verdict and predictions");
  add_common(analyze, f);

  CLI::App* simulate = app.add_subcommand("simulate", "Run a scenario and write CSV traces");
  add_common(simulate, f);
  simulate->add_option("--out", f.out, "Output directory");
  simulate->add_option("--seed", f.seed, "RNG seed override");
  simulate->add_option("--steps", f.steps, "Step count override")->check(CLI::PositiveNumber);
  simulate->add_option("--wheel-k", f.wheel_k, "Ring neighbours for the exp2 preset")
      ->check(CLI::NonNegativeNumber);

  CLI::App* optimize = app.add_subcommand("optimize", "Tune gains to minimise the H2 norm");
  add_common(optimize, f);
  optimize->add_option("--out", f.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : skewless::kExitError;
  }

  try {
    if (optimize->parsed() && f.config.empty()) {
      if (f.preset.empty()) throw std::invalid_argument("one of --config or --preset is required");
      const skewless::TopologySpec topo = skewless::experiment6_topology(f.preset);
      return skewless::cmd_optimize(topo, skewless::default_params(0.5), {}, f.out, std::cout);
    }
    const skewless::Config cfg = resolve(f);
    if (analyze->parsed()) return skewless::cmd_analyze(cfg.scenario, std::cout);
    if (simulate->parsed()) return skewless::cmd_simulate(cfg.scenario, f.out, std::cout);
    return skewless::cmd_optimize(cfg.scenario.topo, cfg.scenario.params, cfg.optimize, f.out,
                                  std::cout);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return skewless::kExitError;
  }
}
