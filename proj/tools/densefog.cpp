// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: run, sweep, validate-config.
// Exit codes: 0 success, 1 runtime error, 2 usage or config error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "densefog/config.hpp"
#include "densefog/engine.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> rounds;
  std::optional<double> duration;
  std::optional<double> density;
  std::optional<double> fog_fraction;
  std::optional<std::string> experiment;
  bool no_proactive = false;
  std::optional<int> degree;
  std::optional<std::string> infra;
  bool paper_scale = false;
  std::string output = "results";
  int jobs = 1;
};

void add_scenario_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "config file (key = value)");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--rounds", o.rounds, "rounds per sweep point")->check(CLI::PositiveNumber);
  cmd->add_option("--duration", o.duration, "simulated seconds per round")->check(CLI::PositiveNumber);
  cmd->add_option("--density", o.density, "vehicles per 100 m of street")->check(CLI::NonNegativeNumber);
  cmd->add_option("--fog-fraction", o.fog_fraction, "fraction of vehicles in the fog")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--experiment", o.experiment, "jaywalk or compute")->check(CLI::IsMember({"jaywalk", "compute"}));
  cmd->add_flag("--no-proactive", o.no_proactive, "disable predictive link reselection");
  cmd->add_option("--degree", o.degree, "max simultaneous links per vehicle")->check(CLI::PositiveNumber);
  cmd->add_option("--infra", o.infra, "base-station compute participation")->check(CLI::IsMember({"on", "off"}));
  cmd->add_flag("--paper-scale", o.paper_scale, "100 rounds of 10 minutes");
}

densefog::ScenarioConfig effective_config(const Overrides& o, bool single_point) {
  densefog::ScenarioConfig c = o.config_path.empty() ? densefog::ScenarioConfig{} : densefog::load_config(o.config_path);
  if (o.paper_scale) densefog::apply_paper_scale(c);
  if (o.seed) c.master_seed = *o.seed;
  if (o.rounds) c.rounds = *o.rounds;
  if (o.duration) c.round_duration_s = *o.duration;
  if (o.experiment) c.experiment = *o.experiment == "compute" ? densefog::Experiment::Compute : densefog::Experiment::Jaywalk;
  if (o.no_proactive) c.network.proactive = false;
  if (o.degree) c.network.max_links = *o.degree;
  if (o.density) {
    c.densities = {*o.density};
    c.compute_density = *o.density;
  }
  if (o.fog_fraction) c.fog_fractions = {*o.fog_fraction};
  if (o.infra) c.infra_modes = {*o.infra == "on"};
  if (single_point) {
    c.densities.resize(std::min<std::size_t>(c.densities.size(), 1));
    c.fog_fractions.resize(std::min<std::size_t>(c.fog_fractions.size(), 1));
    c.infra_modes.resize(std::min<std::size_t>(c.infra_modes.size(), 1));
  }
  densefog::validate_config(c);
  return c;
}

std::string key_listing() {
  std::string s = "Config keys (key = default  # description):\n";
  for (const auto& k : densefog::config_keys()) s += "  " + k.name + " = " + k.default_value + "  # " + k.doc + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"densefog: dense moving fog simulator for a connected vehicle fleet"};
  app.footer(key_listing());
  app.require_subcommand(1);

  Overrides run_o, sweep_o, validate_o;
  auto* run = app.add_subcommand("run", "simulate a single sweep point");
  add_scenario_flags(run, run_o);
  run->add_option("--output", run_o.output, "output directory");
  run->add_option("--jobs", run_o.jobs, "concurrent rounds (0 = all cores)")->check(CLI::NonNegativeNumber);

  auto* sweep = app.add_subcommand("sweep", "simulate every sweep point of the experiment");
  add_scenario_flags(sweep, sweep_o);
  sweep->add_option("--output", sweep_o.output, "output directory");
  sweep->add_option("--jobs", sweep_o.jobs, "concurrent rounds (0 = all cores)")->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate-config", "check a config and print the effective values");
  add_scenario_flags(validate, validate_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) {
      const auto c = effective_config(validate_o, false);
      std::cout << densefog::serialize_config(c);
      return 0;
    }
    const bool single = run->parsed();
    const Overrides& o = single ? run_o : sweep_o;
    const auto c = effective_config(o, single);
    const auto result = densefog::run_experiment(c, o.jobs);
    densefog::write_outputs(result, c, o.output);
    std::cout << densefog::summary_table(result, c);
    std::cout << "wrote " << o.output << "/summary.csv\n";
    return 0;
  } catch (const densefog::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const densefog::DeploymentError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
