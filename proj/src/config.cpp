// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include "densefog/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace densefog {

const char* to_string(Experiment e) { return e == Experiment::Jaywalk ? "jaywalk" : "compute"; }

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* what) {
  throw ConfigError(std::string(key) + ": " + what + " (got '" + std::string(value) + "')");
}

double parse_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v, "expected a number");
  return out;
}

long long parse_int(std::string_view key, std::string_view v) {
  v = trim(v);
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "expected an integer");
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "expected an unsigned integer");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "on") return true;
  if (v == "false" || v == "off") return false;
  bad_value(key, v, "expected true/false");
}

std::string parse_string(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') bad_value(key, v, "expected a quoted string");
  return std::string(v.substr(1, v.size() - 2));
}

std::vector<std::string_view> parse_list(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') bad_value(key, v, "expected a [list]");
  v = trim(v.substr(1, v.size() - 2));
  std::vector<std::string_view> items;
  if (v.empty()) return items;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = v.find(',', start);
    items.push_back(trim(v.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

struct Key {
  const char* name;
  const char* doc;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, std::string_view)> set;
};

template <class Ref>
Key real(const char* name, const char* doc, Ref ref) {
  return {name, doc, [ref](const ScenarioConfig& c) { return format_double(ref(const_cast<ScenarioConfig&>(c))); },
          [ref, name](ScenarioConfig& c, std::string_view v) { ref(c) = parse_double(name, v); }};
}

template <class Ref>
Key integer(const char* name, const char* doc, Ref ref) {
  return {name, doc, [ref](const ScenarioConfig& c) { return std::to_string(ref(const_cast<ScenarioConfig&>(c))); },
          [ref, name](ScenarioConfig& c, std::string_view v) {
            const long long x = parse_int(name, v);
            if (x < -1000000000LL || x > 1000000000LL) bad_value(name, v, "integer out of range");
            ref(c) = static_cast<int>(x);
          }};
}

template <class Ref>
Key boolean(const char* name, const char* doc, Ref ref) {
  return {name, doc,
          [ref](const ScenarioConfig& c) { return std::string(ref(const_cast<ScenarioConfig&>(c)) ? "true" : "false"); },
          [ref, name](ScenarioConfig& c, std::string_view v) { ref(c) = parse_bool(name, v); }};
}

#define FIELD(expr) [](ScenarioConfig& c) -> auto& { return c.expr; }

const std::vector<Key>& keys() {
  static const std::vector<Key> k = [] {
    std::vector<Key> v;
    // Experiment.
    v.push_back({"experiment", "\"jaywalk\" or \"compute\"",
                 [](const ScenarioConfig& c) { return std::string("\"") + to_string(c.experiment) + "\""; },
                 [](ScenarioConfig& c, std::string_view s) {
                   const std::string x = parse_string("experiment", s);
                   if (x == "jaywalk") c.experiment = Experiment::Jaywalk;
                   else if (x == "compute") c.experiment = Experiment::Compute;
                   else bad_value("experiment", s, "expected \"jaywalk\" or \"compute\"");
                 }});
    v.push_back(integer("rounds", "independent rounds per sweep point", FIELD(rounds)));
    v.push_back(real("round_duration_s", "simulated time per round", FIELD(round_duration_s)));
    v.push_back(real("tick_s", "simulation step", FIELD(tick_s)));
    v.push_back({"master_seed", "master seed; every stream derives from it",
                 [](const ScenarioConfig& c) { return std::to_string(c.master_seed); },
                 [](ScenarioConfig& c, std::string_view s) { c.master_seed = parse_u64("master_seed", s); }});
    v.push_back({"densities", "jaywalk sweep: vehicles per 100 m of street",
                 [](const ScenarioConfig& c) {
                   std::string out = "[";
                   for (std::size_t i = 0; i < c.densities.size(); ++i)
                     out += (i ? ", " : "") + format_double(c.densities[i]);
                   return out + "]";
                 },
                 [](ScenarioConfig& c, std::string_view s) {
                   c.densities.clear();
                   for (auto item : parse_list("densities", s)) c.densities.push_back(parse_double("densities", item));
                 }});
    v.push_back({"fog_fractions", "sweep: fraction of vehicles in the fog",
                 [](const ScenarioConfig& c) {
                   std::string out = "[";
                   for (std::size_t i = 0; i < c.fog_fractions.size(); ++i)
                     out += (i ? ", " : "") + format_double(c.fog_fractions[i]);
                   return out + "]";
                 },
                 [](ScenarioConfig& c, std::string_view s) {
                   c.fog_fractions.clear();
                   for (auto item : parse_list("fog_fractions", s))
                     c.fog_fractions.push_back(parse_double("fog_fractions", item));
                 }});
    v.push_back(real("compute_density", "compute experiment: vehicles per 100 m of street", FIELD(compute_density)));
    v.push_back({"infra_modes", "compute sweep: base-station participation values",
                 [](const ScenarioConfig& c) {
                   std::string out = "[";
                   for (std::size_t i = 0; i < c.infra_modes.size(); ++i)
                     out += std::string(i ? ", " : "") + (c.infra_modes[i] ? "true" : "false");
                   return out + "]";
                 },
                 [](ScenarioConfig& c, std::string_view s) {
                   c.infra_modes.clear();
                   for (auto item : parse_list("infra_modes", s)) c.infra_modes.push_back(parse_bool("infra_modes", item));
                 }});
    v.push_back(boolean("job_trace", "write the per-job trace CSV", FIELD(job_trace)));

    // Deployment.
    v.push_back(real("area_width_m", "area of interest along x", FIELD(deployment.area_width_m)));
    v.push_back(real("area_height_m", "area of interest along y", FIELD(deployment.area_height_m)));
    v.push_back(real("block_size_m", "street centerline pitch", FIELD(deployment.block_size_m)));
    v.push_back(real("street_width_m", "curb-to-curb street width", FIELD(deployment.street_width_m)));
    v.push_back(integer("lanes_per_street", "lanes per street, both directions", FIELD(deployment.lanes_per_street)));
    v.push_back(real("sidewalk_width_m", "sidewalk between curb and building", FIELD(deployment.sidewalk_width_m)));
    v.push_back(real("building_height_min_m", "building height lower bound", FIELD(deployment.building_height_min_m)));
    v.push_back(real("building_height_max_m", "building height upper bound", FIELD(deployment.building_height_max_m)));
    v.push_back(real("bs_isd_m", "ISD of stationary BSs", FIELD(deployment.isd_m)));
    v.push_back(real("bs_height_m", "BS height", FIELD(deployment.bs_height_m)));
    v.push_back(integer("bs_sectors", "BS sectors per site", FIELD(deployment.bs_sectors)));
    v.push_back(real("bs_downtilt_deg", "BS downtilt (recorded, unused)", FIELD(deployment.bs_downtilt_deg)));

    // Radio.
    v.push_back(real("carrier_frequency_hz", "carrier frequency", FIELD(radio.carrier_hz)));
    v.push_back(real("bandwidth_hz", "fog slice bandwidth", FIELD(radio.system_bandwidth_hz)));
    v.push_back(real("bs_transmit_power_dbm", "BS transmit power", FIELD(radio.bs_tx_power_dbm)));
    v.push_back(real("car_transmit_power_dbm", "car-cell transmit power", FIELD(radio.vehicle_tx_power_dbm)));
    v.push_back(real("bs_antenna_gain_dbi", "BS sector antenna gain", FIELD(radio.bs_antenna_gain_dbi)));
    v.push_back(real("car_antenna_gain_dbi", "vehicle antenna gain", FIELD(radio.vehicle_antenna_gain_dbi)));
    v.push_back(real("noise_figure_db", "receiver noise figure", FIELD(radio.noise_figure_db)));
    v.push_back(real("vehicle_blockage_db", "penalty of a body-blocked link", FIELD(radio.vehicle_blockage_db)));
    v.push_back(boolean("shadow_fading", "log-normal shadowing per node pair", FIELD(radio.shadow_fading)));

    // Vehicles.
    v.push_back(real("driving_speed_kmh", "driving speed", FIELD(mobility.driving_speed_kmh)));
    v.push_back(real("vehicle_length_m", "body length", FIELD(mobility.vehicle_length_m)));
    v.push_back(real("vehicle_width_m", "body width", FIELD(mobility.vehicle_width_m)));
    v.push_back(real("vehicle_height_m", "body height", FIELD(mobility.vehicle_height_m)));
    v.push_back(real("transceiver_height_m", "windshield transceiver and radar height",
                     FIELD(mobility.transceiver_height_m)));
    v.push_back(real("spacing_jitter", "initial spacing jitter, fraction of the gap", FIELD(mobility.spacing_jitter)));
    v.push_back(real("computing_perf_flops", "vehicle computing performance", FIELD(compute.vehicle_flops)));
    v.push_back(real("bs_computing_perf_flops", "BS computing performance per site", FIELD(compute.bs_flops)));
    v.push_back(real("radar_sensing_range_m", "radar sensing range", FIELD(sensing.radar_range_m)));
    v.push_back(real("radar_cycle_s", "radar cycle duration", FIELD(sensing.radar_cycle_s)));

    // Pedestrians.
    v.push_back(real("jaywalking_speed_kmh", "jaywalking speed", FIELD(jaywalk.jaywalking_speed_kmh)));
    v.push_back(real("jaywalking_intensity_per_min", "jaywalks per minute over the area",
                     FIELD(jaywalk.jaywalking_intensity_per_min)));
    v.push_back(real("pedestrian_height_m", "radar target height", FIELD(jaywalk.target_height_m)));
    v.push_back(boolean("jaywalk_in_intersections", "allow crossings inside intersections",
                        FIELD(jaywalk.spawn_in_intersections)));

    // Network.
    v.push_back(integer("multi_connectivity_degree", "max simultaneous links per vehicle", FIELD(network.max_links)));
    v.push_back(boolean("proactive_reselection", "drop links predicted to block", FIELD(network.proactive)));
    v.push_back(real("lookahead_horizon_s", "blockage prediction horizon", FIELD(network.lookahead_horizon_s)));
    v.push_back(integer("prediction_samples", "instants sampled over the horizon", FIELD(network.prediction_samples)));
    v.push_back(real("forwarding_delay_s", "per-hop forwarding delay", FIELD(network.forwarding_delay_s)));
    v.push_back(real("v2v_range_m", "vehicle-to-vehicle candidate range", FIELD(network.v2v_range_m)));
    v.push_back(real("bs_range_m", "vehicle-to-BS candidate range", FIELD(network.bs_range_m)));
    v.push_back(integer("v2v_candidates", "nearest vehicles considered per fill", FIELD(network.v2v_candidates)));
    v.push_back(real("min_link_snr_db", "links below this full-slice SNR are unusable", FIELD(network.min_link_snr_db)));
    v.push_back(real("fill_retry_s", "delay before retrying to fill a free link slot", FIELD(network.fill_retry_s)));
    v.push_back(real("reselection_period_s", "periodic reselection interval", FIELD(network.reselection_period_s)));
    v.push_back(real("reselection_hysteresis_db", "SNR gain required to swap a link",
                     FIELD(network.reselection_hysteresis_db)));

    // Sensing.
    v.push_back(real("critical_radius_m", "stopping distance defining a miss", FIELD(sensing.critical_radius_m)));
    v.push_back(real("threat_lateral_lanes", "lateral threat band in lane widths", FIELD(sensing.threat_lateral_lanes)));
    v.push_back(real("warning_payload_bits", "size of a fog warning", FIELD(sensing.warning_payload_bits)));
    v.push_back(boolean("warn_non_members", "deliver warnings to vehicles outside the fog",
                        FIELD(sensing.warn_non_members)));

    // Compute.
    v.push_back(real("job_size_flop", "offloadable job size", FIELD(compute.job_size_flop)));
    v.push_back(real("job_interval_s", "time between jobs of one vehicle", FIELD(compute.job_interval_s)));
    v.push_back(real("deadline_s", "on-time deadline", FIELD(compute.deadline_s)));
    v.push_back(real("response_window_s", "round-trip window for responders", FIELD(compute.response_window_s)));
    v.push_back(real("offload_payload_bits", "data sent to each responder", FIELD(compute.offload_payload_bits)));
    return v;
  }();
  return k;
}

#undef FIELD

const Key* find_key(std::string_view name) {
  for (const Key& k : keys())
    if (name == k.name) return &k;
  return nullptr;
}

}  // namespace

std::vector<KeyDoc> config_keys() {
  const ScenarioConfig defaults;
  std::vector<KeyDoc> out;
  for (const Key& k : keys()) out.push_back({k.name, k.get(defaults), k.doc});
  return out;
}

void set_config_value(ScenarioConfig& config, std::string_view key, std::string_view value) {
  const Key* k = find_key(key);
  if (!k) throw ConfigError("unknown key '" + std::string(key) + "'");
  k->set(config, value);
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig c;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (seen.contains(key)) throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
    seen.emplace(key);
    try {
      set_config_value(c, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& config) {
  std::string out;
  for (const Key& k : keys()) {
    out += "# ";
    out += k.doc;
    out += "\n";
    out += k.name;
    out += " = ";
    out += k.get(config);
    out += "\n";
  }
  return out;
}

void validate_config(const ScenarioConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  const auto& d = c.deployment;
  require(d.area_width_m > 0 && d.area_height_m > 0, "area dimensions must be positive");
  require(d.block_size_m > 0 && d.street_width_m > 0, "block size and street width must be positive");
  require(d.lanes_per_street >= 2 && d.lanes_per_street % 2 == 0, "lanes_per_street must be even and >= 2");
  require(d.sidewalk_width_m >= 0, "sidewalk_width_m must be >= 0");
  require(d.building_height_min_m > 0 && d.building_height_max_m >= d.building_height_min_m,
          "building heights must satisfy 0 < min <= max");
  require(d.isd_m > 0 && d.bs_height_m > 0 && d.bs_sectors >= 1, "BS lattice parameters must be positive");

  const auto& r = c.radio;
  require(r.carrier_hz > 0 && r.system_bandwidth_hz > 0, "carrier and bandwidth must be positive");
  require(r.bs_tx_power_dbm >= -30 && r.bs_tx_power_dbm <= 50, "bs_transmit_power_dbm must lie in [-30, 50]");
  require(r.vehicle_tx_power_dbm >= -30 && r.vehicle_tx_power_dbm <= 50, "car_transmit_power_dbm must lie in [-30, 50]");
  require(r.noise_figure_db >= 0 && r.vehicle_blockage_db >= 0, "noise figure and blockage penalty must be >= 0");

  const auto& m = c.mobility;
  require(m.driving_speed_kmh >= 0, "driving_speed_kmh must be >= 0");
  require(m.vehicle_length_m > 0 && m.vehicle_width_m > 0 && m.vehicle_height_m > 0, "body dimensions must be positive");
  require(m.transceiver_height_m > 0, "transceiver_height_m must be positive");
  require(m.spacing_jitter >= 0 && m.spacing_jitter <= 1, "spacing_jitter must lie in [0, 1]");

  require(c.jaywalk.jaywalking_speed_kmh > 0, "jaywalking_speed_kmh must be positive");
  require(c.jaywalk.jaywalking_intensity_per_min >= 0, "jaywalking_intensity_per_min must be >= 0");
  require(c.jaywalk.target_height_m > 0, "pedestrian_height_m must be positive");

  const auto& n = c.network;
  require(n.max_links >= 1, "multi_connectivity_degree must be >= 1");
  require(n.lookahead_horizon_s >= 0 && n.prediction_samples >= 0, "lookahead parameters must be >= 0");
  require(n.forwarding_delay_s >= 0, "forwarding_delay_s must be >= 0");
  require(n.v2v_range_m > 0 && n.bs_range_m > 0 && n.v2v_candidates >= 0, "link ranges must be positive");
  require(n.fill_retry_s >= 0 && n.reselection_period_s > 0 && n.reselection_hysteresis_db >= 0,
          "reselection timers must be positive");

  const auto& s = c.sensing;
  require(s.radar_range_m > 0 && s.radar_cycle_s > 0, "radar range and cycle must be positive");
  require(s.critical_radius_m >= 0 && s.threat_lateral_lanes >= 0, "miss criterion must be >= 0");
  require(s.warning_payload_bits >= 0, "warning_payload_bits must be >= 0");

  const auto& p = c.compute;
  require(p.job_size_flop >= 0, "job_size_flop must be >= 0");
  require(p.vehicle_flops > 0 && p.bs_flops > 0, "computing performance must be positive");
  require(p.job_interval_s > 0 && p.deadline_s > 0 && p.response_window_s >= 0, "job timing must be positive");
  require(p.offload_payload_bits >= 0, "offload_payload_bits must be >= 0");

  require(c.rounds >= 1, "rounds must be >= 1");
  require(c.round_duration_s > 0 && c.tick_s > 0, "round duration and tick must be positive");
  require(c.tick_s <= c.round_duration_s, "tick_s must not exceed round_duration_s");
  require(!c.densities.empty() && !c.fog_fractions.empty() && !c.infra_modes.empty(), "sweep axes must be non-empty");
  for (double x : c.densities) require(x >= 0, "densities must be >= 0");
  require(c.compute_density >= 0, "compute_density must be >= 0");
  for (double f : c.fog_fractions) require(f >= 0 && f <= 1, "fog_fractions must lie in [0, 1]");
}

void apply_paper_scale(ScenarioConfig& config) {
  config.rounds = 100;
  config.round_duration_s = 600.0;
}

}  // namespace densefog
