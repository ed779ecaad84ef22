// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

// Data-parallel per-tick kernels. Each has an OpenMP version used by the
// simulator and a serial reference used by the tests and the benchmark;
// both write one output slot per input, so their results are identical.

#pragma once

#include <cstdint>
#include <span>

#include "densefog/geometry.hpp"

namespace densefog {

/// One radio segment to classify now and over the lookahead horizon.
/// Endpoints move linearly with the given velocities.
struct SegmentQuery {
  Point3 a, b;
  Point3 velocity_a, velocity_b;
  int owner_a = -1;  // vehicle id owning endpoint a, or -1
  int owner_b = -1;
};

struct SegmentState {
  LosState now = LosState::Clear;
  LosState worst = LosState::Clear;  // worst over now and the sampled horizon instants
};

// Ordering used for "worst": building > vehicle > clear.
int severity(LosState s);

/// Classify one segment at extrapolation offset tau (seconds).
LosState los_at(const SegmentQuery& q, double tau, const Deployment& deployment, const VehicleIndex& vehicles);

/// Sweep instants horizon * k / samples for k = 1..samples. horizon 0 or
/// samples 0 reduce to the current state.
SegmentState sweep_segment(const SegmentQuery& q, double horizon, int samples, const Deployment& deployment,
                           const VehicleIndex& vehicles);

void classify_segments_serial(std::span<const SegmentQuery> queries, double horizon, int samples,
                              const Deployment& deployment, const VehicleIndex& vehicles,
                              std::span<SegmentState> out);

void classify_segments_parallel(std::span<const SegmentQuery> queries, double horizon, int samples,
                                const Deployment& deployment, const VehicleIndex& vehicles,
                                std::span<SegmentState> out);

/// Radar visibility: 1 if the target is within range and the line from the
/// sensor is clear of buildings and of every body but the sensor's own.
struct RadarQuery {
  Point3 sensor;
  Point3 target;
  int vehicle = -1;
};

void radar_visibility_serial(std::span<const RadarQuery> queries, double range, const Deployment& deployment,
                             const VehicleIndex& vehicles, std::span<std::uint8_t> out);

void radar_visibility_parallel(std::span<const RadarQuery> queries, double range, const Deployment& deployment,
                               const VehicleIndex& vehicles, std::span<std::uint8_t> out);

// Enables/disables the OpenMP paths globally (used when rounds themselves
// run in parallel).
void set_kernel_parallelism(bool enabled);
bool kernel_parallelism();

}  // namespace densefog
