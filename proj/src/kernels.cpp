// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include "densefog/kernels.hpp"

#include <array>
#include <atomic>

#include <omp.h>

namespace densefog {

namespace {
std::atomic<bool> g_parallel{true};

// Below this many items the OpenMP fork costs more than it saves.
constexpr std::ptrdiff_t kMinParallelItems = 256;
}  // namespace

void set_kernel_parallelism(bool enabled) { g_parallel.store(enabled); }
bool kernel_parallelism() { return g_parallel.load(); }

int severity(LosState s) {
  switch (s) {
    case LosState::Clear: return 0;
    case LosState::VehicleBlocked: return 1;
    case LosState::BuildingBlocked: return 2;
  }
  return 0;
}

LosState los_at(const SegmentQuery& q, double tau, const Deployment& deployment, const VehicleIndex& vehicles) {
  const Point3 a = q.a + q.velocity_a * tau;
  const Point3 b = q.b + q.velocity_b * tau;
  if (deployment.building_blocked(a, b)) return LosState::BuildingBlocked;
  std::array<int, 2> exclude{q.owner_a, q.owner_b};
  if (vehicles.blocks(a, b, exclude, tau)) return LosState::VehicleBlocked;
  return LosState::Clear;
}

SegmentState sweep_segment(const SegmentQuery& q, double horizon, int samples, const Deployment& deployment,
                           const VehicleIndex& vehicles) {
  SegmentState st;
  st.now = los_at(q, 0.0, deployment, vehicles);
  st.worst = st.now;
  if (horizon <= 0.0) return st;
  for (int k = 1; k <= samples && st.worst != LosState::BuildingBlocked; ++k) {
    LosState s = los_at(q, horizon * k / samples, deployment, vehicles);
    if (severity(s) > severity(st.worst)) st.worst = s;
  }
  return st;
}

void classify_segments_serial(std::span<const SegmentQuery> queries, double horizon, int samples,
                              const Deployment& deployment, const VehicleIndex& vehicles,
                              std::span<SegmentState> out) {
  for (std::size_t i = 0; i < queries.size(); ++i)
    out[i] = sweep_segment(queries[i], horizon, samples, deployment, vehicles);
}

void classify_segments_parallel(std::span<const SegmentQuery> queries, double horizon, int samples,
                                const Deployment& deployment, const VehicleIndex& vehicles,
                                std::span<SegmentState> out) {
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 64) if (g_parallel.load() && n >= kMinParallelItems)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = sweep_segment(queries[i], horizon, samples, deployment, vehicles);
}

namespace {

std::uint8_t visible(const RadarQuery& q, double range, const Deployment& deployment, const VehicleIndex& vehicles) {
  if (distance(q.sensor, q.target) > range) return 0;
  if (deployment.building_blocked(q.sensor, q.target)) return 0;
  std::array<int, 1> exclude{q.vehicle};
  return vehicles.blocks(q.sensor, q.target, exclude) ? 0 : 1;
}

}  // namespace

void radar_visibility_serial(std::span<const RadarQuery> queries, double range, const Deployment& deployment,
                             const VehicleIndex& vehicles, std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < queries.size(); ++i) out[i] = visible(queries[i], range, deployment, vehicles);
}

void radar_visibility_parallel(std::span<const RadarQuery> queries, double range, const Deployment& deployment,
                               const VehicleIndex& vehicles, std::span<std::uint8_t> out) {
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static) if (g_parallel.load() && n >= kMinParallelItems)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = visible(queries[i], range, deployment, vehicles);
}

}  // namespace densefog
