// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include "densefog/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "densefog/kernels.hpp"

namespace densefog {

bool radar_fires(double phase, double cycle, double t, double dt) {
  if (t < phase) return false;
  const double k = std::floor((t - phase) / cycle);
  const double instant = phase + k * cycle;
  return instant > t - dt && instant <= t;
}

int DetectionLedger::add(const JaywalkEvent& e) {
  EventRecord r;
  r.event = e;
  r.local_detection.assign(vehicles_, kNever);
  r.warning_receipt.assign(vehicles_, kNever);
  r.verdict.assign(vehicles_, Verdict::None);
  events_.push_back(std::move(r));
  return static_cast<int>(events_.size()) - 1;
}

bool DetectionLedger::record_detection(int event, int vehicle, double t) {
  EventRecord& r = events_[event];
  if (r.local_detection[vehicle] <= t) return false;
  r.local_detection[vehicle] = t;
  ++r.detectors;
  if (t < r.first_detection || (t == r.first_detection && vehicle < r.first_detector)) {
    r.first_detection = t;
    r.first_detector = vehicle;
  }
  return true;
}

void DetectionLedger::record_warning(int event, int vehicle, double t) {
  EventRecord& r = events_[event];
  if (t >= r.warning_receipt[vehicle]) return;
  if (r.warning_receipt[vehicle] == kNever) ++r.warned;
  r.warning_receipt[vehicle] = t;
}

int DetectionLedger::total_misses() const {
  int n = 0;
  for (const auto& r : events_) n += r.misses;
  return n;
}

int DetectionLedger::total_threatened() const {
  int n = 0;
  for (const auto& r : events_) n += r.threatened;
  return n;
}

std::vector<Detection> radar_scan(DetectionLedger& ledger, std::span<const VehiclePose> vehicles,
                                  std::span<const double> radar_phase, const Deployment& deployment,
                                  const VehicleIndex& index, const SensingParams& params, double t, double dt) {
  std::vector<Detection> pairs;
  std::vector<RadarQuery> queries;
  const double r = params.radar_range_m;
  auto& events = ledger.events();
  for (std::size_t ei = 0; ei < events.size(); ++ei) {
    const EventRecord& rec = events[ei];
    if (!rec.event.active_at(t)) continue;
    const Point3 p = rec.event.position_at(t);
    std::vector<int> near;
    index.for_each_near(p.x - r, p.y - r, p.x + r, p.y + r, [&](int id) { near.push_back(id); });
    std::sort(near.begin(), near.end());
    near.erase(std::unique(near.begin(), near.end()), near.end());
    for (int v : near) {
      if (rec.local_detection[v] <= t || !radar_fires(radar_phase[v], params.radar_cycle_s, t, dt)) continue;
      if (distance(vehicles[v].position, p) > r) continue;
      pairs.push_back({static_cast<int>(ei), v});
      queries.push_back({vehicles[v].position, p, v});
    }
  }
  std::vector<std::uint8_t> seen(queries.size(), 0);
  radar_visibility_parallel(queries, r, deployment, index, seen);
  std::vector<Detection> out;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (seen[k] && ledger.record_detection(pairs[k].event, pairs[k].vehicle, t)) out.push_back(pairs[k]);
  return out;
}

WarningStats fuse_and_warn(DetectionLedger& ledger, std::span<const Detection> detections,
                           std::span<const std::uint8_t> fog_member, const Graph& graph,
                           const NetworkParams& network, const SensingParams& params, double t) {
  WarningStats stats;
  const auto n = static_cast<int>(ledger.vehicle_count());
  for (const Detection& d : detections) {
    if (!fog_member[d.vehicle]) continue;
    ++stats.broadcasts;
    const RouteTree tree = widest_paths(graph, d.vehicle, network.forwarding_delay_s, params.warning_payload_bits);
    EventRecord& rec = ledger.events()[d.event];
    for (int u = 0; u < n; ++u) {
      if (u == d.vehicle) continue;
      const bool eligible = fog_member[u] || params.warn_non_members;
      if (!eligible) continue;
      if (!tree.reachable(u)) {
        if (fog_member[u]) ++rec.undelivered;
        continue;
      }
      ledger.record_warning(d.event, u, t + tree.latency_s[u]);
      ++stats.deliveries;
    }
  }
  return stats;
}

bool threatened(const VehiclePose& v, const JaywalkEvent& e, Point3 p, double lane_width,
                const SensingParams& params) {
  if (std::abs(dot(v.heading, e.street_dir)) < 0.5) return false;
  const Point3 rel{p.x - v.position.x, p.y - v.position.y, 0.0};
  const double ahead = dot(rel, v.heading);
  const double lateral = std::abs(dot(rel, e.direction));
  return ahead >= 0.0 && ahead <= params.critical_radius_m && lateral <= params.threat_lateral_lanes * lane_width;
}

void judge_misses(DetectionLedger& ledger, std::span<const VehiclePose> vehicles, const VehicleIndex& index,
                  double lane_width, const SensingParams& params, double t) {
  const double r = params.critical_radius_m + lane_width * params.threat_lateral_lanes;
  for (EventRecord& rec : ledger.events()) {
    if (!rec.event.active_at(t)) continue;
    const Point3 p = rec.event.position_at(t);
    std::vector<int> near;
    index.for_each_near(p.x - r, p.y - r, p.x + r, p.y + r, [&](int id) { near.push_back(id); });
    std::sort(near.begin(), near.end());
    near.erase(std::unique(near.begin(), near.end()), near.end());
    for (int v : near) {
      if (rec.verdict[v] != Verdict::None || !threatened(vehicles[v], rec.event, p, lane_width, params)) continue;
      ++rec.threatened;
      if (rec.knows(v, t)) {
        rec.verdict[v] = Verdict::Safe;
      } else {
        rec.verdict[v] = Verdict::Miss;
        ++rec.misses;
      }
    }
  }
}

}  // namespace densefog
