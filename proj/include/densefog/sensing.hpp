// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "densefog/connectivity.hpp"
#include "densefog/geometry.hpp"
#include "densefog/mobility.hpp"

namespace densefog {

struct SensingParams {
  double radar_range_m = 50.0;
  double radar_cycle_s = 0.066;
  double critical_radius_m = 14.0;
  double threat_lateral_lanes = 1.0;  // lateral threat band in lane widths
  double warning_payload_bits = 8000.0;
  // Deliver fog warnings to every reachable vehicle, not only fog members.
  bool warn_non_members = true;
};

inline constexpr double kNever = std::numeric_limits<double>::infinity();

/// True if a radar with the given phase fires at some instant
/// phase + k * cycle (k >= 0) inside the tick (t - dt, t].
bool radar_fires(double phase, double cycle, double t, double dt);

enum class Verdict : std::uint8_t { None, Safe, Miss };

struct EventRecord {
  JaywalkEvent event;
  double first_detection = kNever;
  int first_detector = -1;
  std::vector<double> local_detection;  // per vehicle
  std::vector<double> warning_receipt;  // per vehicle
  std::vector<Verdict> verdict;         // per vehicle, set once
  int detectors = 0;
  int warned = 0;
  int threatened = 0;
  int misses = 0;
  int undelivered = 0;  // members a member's broadcast could not reach

  bool knows(int vehicle, double t) const {
    return local_detection[vehicle] <= t || warning_receipt[vehicle] <= t;
  }
};

struct Detection {
  int event = 0;  // index into the ledger
  int vehicle = 0;
};

class DetectionLedger {
 public:
  explicit DetectionLedger(std::size_t vehicles = 0) : vehicles_(vehicles) {}

  int add(const JaywalkEvent& e);
  std::vector<EventRecord>& events() { return events_; }
  const std::vector<EventRecord>& events() const { return events_; }
  std::size_t vehicle_count() const { return vehicles_; }

  // Records a local detection. Returns false if the vehicle already knew.
  bool record_detection(int event, int vehicle, double t);
  void record_warning(int event, int vehicle, double t);

  int total_misses() const;
  int total_threatened() const;

 private:
  std::size_t vehicles_;
  std::vector<EventRecord> events_;
};

/// Radar pass for the tick ending at t. Vehicles whose cycle fires scan every
/// active event; a pedestrian is seen iff within range and the line from the
/// windshield is clear of buildings and other bodies. Returns the new
/// detections in (event, vehicle) order.
std::vector<Detection> radar_scan(DetectionLedger& ledger, std::span<const VehiclePose> vehicles,
                                  std::span<const double> radar_phase, const Deployment& deployment,
                                  const VehicleIndex& index, const SensingParams& params, double t, double dt);

struct WarningStats {
  int broadcasts = 0;
  int deliveries = 0;
};

/// Broadcasts each new detection made by a fog member over widest-path
/// routes. A receiver is warned at t + route latency; the earliest receipt
/// wins.
WarningStats fuse_and_warn(DetectionLedger& ledger, std::span<const Detection> detections,
                           std::span<const std::uint8_t> fog_member, const Graph& graph,
                           const NetworkParams& network, const SensingParams& params, double t);

/// True if the vehicle is threatened by the pedestrian at p: driving parallel
/// to the event's street, lane within the lateral band, and the pedestrian
/// ahead within the critical radius.
bool threatened(const VehiclePose& v, const JaywalkEvent& e, Point3 p, double lane_width,
                const SensingParams& params);

/// Issues verdicts for vehicles that become threatened at t. A vehicle is
/// judged once per event: a miss unless it detected or was warned by t.
void judge_misses(DetectionLedger& ledger, std::span<const VehiclePose> vehicles, const VehicleIndex& index,
                  double lane_width, const SensingParams& params, double t);

}  // namespace densefog
