// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include "densefog/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "densefog/rng.hpp"

namespace densefog {

double breakpoint_distance(double h_bs, double h_ut, double carrier_hz) {
  const double h_e = 1.0;
  return 4.0 * (h_bs - h_e) * (h_ut - h_e) * carrier_hz / kSpeedOfLight;
}

double pathloss_umi(double d2d, double h_tx, double h_rx, double carrier_hz, bool building_blocked) {
  const double h_bs = std::max(h_tx, h_rx);
  const double h_ut = std::min(h_tx, h_rx);
  const double d_2d = std::max(d2d, 1.0);
  const double dh = h_bs - h_ut;
  const double d_3d = std::sqrt(d_2d * d_2d + dh * dh);
  const double fc_ghz = carrier_hz / 1e9;
  const double d_bp = breakpoint_distance(h_bs, h_ut, carrier_hz);

  double los;
  if (d_2d <= d_bp) {
    los = 32.4 + 21.0 * std::log10(d_3d) + 20.0 * std::log10(fc_ghz);
  } else {
    los = 32.4 + 40.0 * std::log10(d_3d) + 20.0 * std::log10(fc_ghz) -
          9.5 * std::log10(d_bp * d_bp + dh * dh);
  }
  if (!building_blocked) return los;
  const double nlos = 35.3 * std::log10(d_3d) + 22.4 + 21.3 * std::log10(fc_ghz) - 0.3 * (h_ut - 1.5);
  return std::max(los, nlos);
}

double shadow_fading_sigma_db(bool building_blocked) { return building_blocked ? 7.82 : 4.0; }

double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
  return kThermalNoiseDbmHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double snr_db(const SnrInputs& in) {
  return in.tx_power_dbm + in.tx_gain_dbi + in.rx_gain_dbi - in.pathloss_db - in.blockage_db -
         noise_power_dbm(in.bandwidth_hz, in.noise_figure_db);
}

double capacity_bps(double snr, double bandwidth_hz) {
  if (bandwidth_hz <= 0.0) return 0.0;
  return bandwidth_hz * std::log2(1.0 + std::pow(10.0, snr / 10.0));
}

LinkBudget link_budget(Point3 a, EndpointKind kind_a, Point3 b, EndpointKind kind_b, LosState los,
                       double bandwidth_hz, const RadioParams& radio, double shadowing_db) {
  LinkBudget out;
  out.distance_3d = distance(a, b);
  out.los = los;
  out.pathloss_db =
      pathloss_umi(distance_2d(a, b), a.z, b.z, radio.carrier_hz, los == LosState::BuildingBlocked) + shadowing_db;

  auto tx_power = [&](EndpointKind k) {
    return k == EndpointKind::BaseStation ? radio.bs_tx_power_dbm : radio.vehicle_tx_power_dbm;
  };
  auto gain = [&](EndpointKind k) {
    return k == EndpointKind::BaseStation ? radio.bs_antenna_gain_dbi : radio.vehicle_antenna_gain_dbi;
  };
  SnrInputs in;
  in.tx_power_dbm = std::min(tx_power(kind_a), tx_power(kind_b));
  in.tx_gain_dbi = gain(kind_a);
  in.rx_gain_dbi = gain(kind_b);
  in.pathloss_db = out.pathloss_db;
  in.blockage_db = los == LosState::VehicleBlocked ? radio.vehicle_blockage_db : 0.0;
  in.noise_figure_db = radio.noise_figure_db;
  // An unallocated (standby) link is still characterized over the full slice.
  in.bandwidth_hz = bandwidth_hz > 0.0 ? bandwidth_hz : radio.system_bandwidth_hz;
  out.snr_db = snr_db(in);
  out.allocated_bandwidth_hz = std::max(bandwidth_hz, 0.0);
  out.capacity_bps = capacity_bps(out.snr_db, out.allocated_bandwidth_hz);
  return out;
}

LinkBudget reslice(const LinkBudget& full_slice, double bandwidth_hz, const RadioParams& radio) {
  LinkBudget out = full_slice;
  if (bandwidth_hz > 0.0) out.snr_db = full_slice.snr_db + 10.0 * std::log10(radio.system_bandwidth_hz / bandwidth_hz);
  out.allocated_bandwidth_hz = std::max(bandwidth_hz, 0.0);
  out.capacity_bps = capacity_bps(out.snr_db, out.allocated_bandwidth_hz);
  return out;
}

double pair_shadowing_db(std::uint64_t seed, int node_a, int node_b, bool building_blocked) {
  const auto lo = static_cast<std::uint64_t>(std::min(node_a, node_b));
  const auto hi = static_cast<std::uint64_t>(std::max(node_a, node_b));
  const std::uint64_t h = mix_seed(mix_seed(mix_seed(seed, fnv1a("shadowing")), lo), hi);
  // Box-Muller on two hashed uniforms.
  const double u1 = 1.0 - unit_interval(splitmix64(h));
  const double u2 = unit_interval(splitmix64(h ^ 0xA5A5A5A5A5A5A5A5ULL));
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return z * shadow_fading_sigma_db(building_blocked);
}

}  // namespace densefog
