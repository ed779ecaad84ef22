// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "densefog/channel.hpp"
#include "densefog/compute.hpp"
#include "densefog/connectivity.hpp"
#include "densefog/geometry.hpp"
#include "densefog/mobility.hpp"
#include "densefog/sensing.hpp"

namespace densefog {

enum class Experiment { Jaywalk, Compute };

const char* to_string(Experiment e);

struct ScenarioConfig {
  DeploymentParams deployment;
  RadioParams radio;
  MobilityParams mobility;
  JaywalkParams jaywalk;
  NetworkParams network;
  SensingParams sensing;
  ComputeParams compute;

  Experiment experiment = Experiment::Jaywalk;
  int rounds = 10;
  double round_duration_s = 60.0;
  double tick_s = 0.01;
  std::uint64_t master_seed = 1;
  std::vector<double> densities{10.0, 20.0, 30.0, 40.0, 50.0};
  std::vector<double> fog_fractions{0.0, 0.2, 0.5, 1.0};
  double compute_density = 20.0;
  std::vector<bool> infra_modes{false, true};
  bool job_trace = false;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct KeyDoc {
  std::string name;
  std::string default_value;
  std::string doc;
};

/// Every config key with its default and a one-line description.
std::vector<KeyDoc> config_keys();

/// Parses `key = value` lines (`#` starts a comment) over the defaults.
/// Unknown or duplicate keys and malformed values throw ConfigError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

// Applies one key with a value in file syntax.
void set_config_value(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Serializes every key. parse_config(serialize_config(c)) reproduces c
/// exactly.
std::string serialize_config(const ScenarioConfig& config);

/// Throws ConfigError on the first out-of-range value.
void validate_config(const ScenarioConfig& config);

// 100 rounds of 10 minutes.
void apply_paper_scale(ScenarioConfig& config);

// Formats a double so that it parses back to the same value.
std::string format_double(double v);

}  // namespace densefog
