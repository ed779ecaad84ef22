// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "densefog/geometry.hpp"

namespace densefog {

struct RadioParams {
  double carrier_hz = 28e9;
  double system_bandwidth_hz = 500e6;
  double bs_tx_power_dbm = 35.0;
  double vehicle_tx_power_dbm = 20.0;
  double bs_antenna_gain_dbi = 10.0;
  double vehicle_antenna_gain_dbi = 5.0;
  double noise_figure_db = 7.0;
  double vehicle_blockage_db = 20.0;
  bool shadow_fading = false;
};

// Thermal noise floor in dBm/Hz.
inline constexpr double kThermalNoiseDbmHz = -174.0;
inline constexpr double kSpeedOfLight = 299792458.0;

/// Effective-height breakpoint distance of the UMi street-canyon LoS model
/// (environment height 1 m).
double breakpoint_distance(double h_bs, double h_ut, double carrier_hz);

/// UMi street-canyon pathloss in dB. The taller endpoint plays the BS role.
/// d2d is clamped to at least 1 m. With building_blocked the NLoS value
/// max(PL_LoS, PL'_NLoS) is returned.
double pathloss_umi(double d2d, double h_tx, double h_rx, double carrier_hz, bool building_blocked);

/// Log-normal shadowing standard deviation for the UMi street-canyon model.
double shadow_fading_sigma_db(bool building_blocked);

double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

struct SnrInputs {
  double tx_power_dbm = 0.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double pathloss_db = 0.0;
  double blockage_db = 0.0;
  double bandwidth_hz = 1.0;
  double noise_figure_db = 0.0;
};

double snr_db(const SnrInputs& in);

/// Shannon capacity B * log2(1 + 10^(snr/10)); zero for B <= 0.
double capacity_bps(double snr_db, double bandwidth_hz);

struct LinkBudget {
  double distance_3d = 0.0;
  LosState los = LosState::Clear;
  double pathloss_db = 0.0;
  double snr_db = 0.0;
  double allocated_bandwidth_hz = 0.0;
  double capacity_bps = 0.0;
};

enum class EndpointKind { Vehicle, BaseStation };

/// Budget of the weaker direction of a link between two endpoints. For a
/// vehicle-to-BS link that is the uplink at car-cell transmit power.
/// `shadowing_db` is added to the pathloss (zero unless shadow fading is on).
LinkBudget link_budget(Point3 a, EndpointKind kind_a, Point3 b, EndpointKind kind_b, LosState los,
                       double bandwidth_hz, const RadioParams& radio, double shadowing_db = 0.0);

/// The same link with `bandwidth_hz` allocated instead of the full slice.
/// Only the noise power changes: SNR shifts by 10 log10(B_full / B).
LinkBudget reslice(const LinkBudget& full_slice, double bandwidth_hz, const RadioParams& radio);

/// Deterministic shadowing draw for a node pair, N(0, sigma) from a hash of
/// the pair and the round seed, so the same pair sees the same value all round.
double pair_shadowing_db(std::uint64_t seed, int node_a, int node_b, bool building_blocked);

}  // namespace densefog
