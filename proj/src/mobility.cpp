// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include "densefog/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace densefog {

std::size_t fleet_size(const StreetGrid& grid, double density_per_100m) {
  return static_cast<std::size_t>(std::llround(density_per_100m * grid.total_street_length() / 100.0));
}

namespace {

Point3 heading_of(Axis axis, int dir) {
  return axis == Axis::X ? Point3{static_cast<double>(dir), 0.0, 0.0} : Point3{0.0, static_cast<double>(dir), 0.0};
}

double extent(const StreetGrid& g, Axis axis) { return axis == Axis::X ? g.extent_x() : g.extent_y(); }

int streets_across(const StreetGrid& g, Axis axis) { return axis == Axis::X ? g.blocks_y : g.blocks_x; }

int wrap_index(int k, int n) { return ((k % n) + n) % n; }

double wrap_coord(double s, double length) {
  if (s >= length) s -= length;
  if (s < 0.0) s += length;
  return s;
}

void place(VehiclePose& v, const StreetGrid& g, double height) {
  v.heading = heading_of(v.axis, v.dir);
  v.position = lane_position(g, v.axis, v.street, v.dir, v.lane, v.s, height);
}

}  // namespace

Point3 lane_position(const StreetGrid& grid, Axis axis, int street, int dir, int lane, double s, double height) {
  // Right-hand traffic: lanes lie on the right of the heading.
  const double offset = grid.lane_width() * (lane + 0.5);
  const double center = street * grid.block_size;
  if (axis == Axis::X) return {s, center - dir * offset, height};
  return {center + dir * offset, s, height};
}

std::vector<VehiclePose> spawn_fleet(const StreetGrid& grid, const MobilityParams& params, Rng& rng) {
  const std::size_t n = fleet_size(grid, params.density_per_100m);
  const double speed = kmh_to_ms(params.driving_speed_kmh);

  struct LaneRef {
    Axis axis;
    int street, dir, lane;
  };
  std::vector<LaneRef> lanes;
  for (Axis axis : {Axis::X, Axis::Y})
    for (int street = 0; street < streets_across(grid, axis); ++street)
      for (int dir : {1, -1})
        for (int lane = 0; lane < grid.lanes_per_direction(); ++lane) lanes.push_back({axis, street, dir, lane});

  std::vector<VehiclePose> fleet;
  fleet.reserve(n);
  if (lanes.empty()) return fleet;
  // Spread the fleet as evenly as possible; the remainder goes to randomly
  // chosen lanes.
  std::vector<std::size_t> per_lane(lanes.size(), n / lanes.size());
  std::vector<std::size_t> order(lanes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  for (std::size_t r = 0; r < n % lanes.size(); ++r) ++per_lane[order[r]];

  int id = 0;
  for (std::size_t l = 0; l < lanes.size(); ++l) {
    const auto& ref = lanes[l];
    const double length = extent(grid, ref.axis);
    const double gap = length / std::max<std::size_t>(per_lane[l], 1);
    const double phase = rng.uniform(0.0, gap);
    for (std::size_t k = 0; k < per_lane[l]; ++k) {
      VehiclePose v;
      v.id = id++;
      v.speed = speed;
      v.axis = ref.axis;
      v.street = ref.street;
      v.dir = ref.dir;
      v.lane = ref.lane;
      double jitter = params.spacing_jitter * gap * (rng.uniform() - 0.5);
      v.s = wrap_coord(std::fmod(phase + k * gap + jitter + length, length), length);
      place(v, grid, params.transceiver_height_m);
      fleet.push_back(v);
    }
  }
  return fleet;
}

void step_vehicles(std::span<VehiclePose> vehicles, const StreetGrid& grid, double dt, Rng& turns,
                   double transceiver_height) {
  if (dt <= 0.0) return;
  const double pitch = grid.block_size;
  for (auto& v : vehicles) {
    const double length = extent(grid, v.axis);
    const double travel = v.speed * dt;
    const double s1 = v.s + v.dir * travel;
    // Next intersection strictly ahead of the current coordinate.
    const double k = v.dir > 0 ? std::floor(v.s / pitch) + 1.0 : std::ceil(v.s / pitch) - 1.0;
    const double crossing = k * pitch;
    const bool crosses = v.dir > 0 ? s1 >= crossing : s1 <= crossing;
    if (!crosses) {
      v.s = wrap_coord(s1, length);
      place(v, grid, transceiver_height);
      continue;
    }
    const double leftover = std::abs(s1 - crossing);
    const auto choice = turns.below(3);  // 0 straight, 1 left, 2 right
    if (choice == 0) {
      v.s = wrap_coord(s1, length);
    } else {
      const Point3 h = heading_of(v.axis, v.dir);
      const Point3 nh = choice == 1 ? Point3{-h.y, h.x, 0.0} : Point3{h.y, -h.x, 0.0};
      const Axis new_axis = v.axis == Axis::X ? Axis::Y : Axis::X;
      const int new_dir = new_axis == Axis::X ? static_cast<int>(nh.x) : static_cast<int>(nh.y);
      const double cross_coord = v.street * pitch;  // where the new street's axis coordinate starts
      v.street = wrap_index(static_cast<int>(k), streets_across(grid, new_axis));
      v.axis = new_axis;
      v.dir = new_dir;
      v.s = wrap_coord(cross_coord + new_dir * leftover, extent(grid, new_axis));
    }
    place(v, grid, transceiver_height);
  }
}

BoxObstacle vehicle_box(const VehiclePose& v, const MobilityParams& params) {
  const double half_len = params.vehicle_length_m / 2.0;
  const double half_w = params.vehicle_width_m / 2.0;
  const double half_h = params.vehicle_height_m / 2.0;
  Point3 c = v.position - v.heading * half_len;
  c.z = half_h;
  const bool along_x = v.heading.x != 0.0;
  return BoxObstacle{c, along_x ? Point3{half_len, half_w, half_h} : Point3{half_w, half_len, half_h},
                     ObstacleKind::VehicleBody};
}

Point3 JaywalkEvent::position_at(double t) const {
  const double walked = std::clamp((t - spawn_time) * speed, 0.0, crossing_length);
  return entry + direction * walked;
}

JaywalkProcess::JaywalkProcess(const StreetGrid& grid, const JaywalkParams& params, Rng rng)
    : grid_(grid), params_(params), rng_(std::move(rng)) {
  rate_per_s_ = params.jaywalking_intensity_per_min / 60.0;
  next_arrival_ = rate_per_s_ > 0.0 ? rng_.exponential(rate_per_s_) : std::numeric_limits<double>::infinity();
}

std::vector<JaywalkEvent> JaywalkProcess::spawn(double t, double /*dt*/) {
  std::vector<JaywalkEvent> out;
  while (next_arrival_ <= t) {
    out.push_back(make_event(next_arrival_));
    next_arrival_ += rng_.exponential(rate_per_s_);
  }
  return out;
}

JaywalkEvent JaywalkProcess::make_event(double at) {
  const double pitch = grid_.block_size;
  const double half_street = grid_.street_width / 2.0;
  // Every street segment between intersections has the same length, so a
  // uniform segment pick is uniform by street length.
  const std::size_t x_segments = static_cast<std::size_t>(grid_.blocks_y) * grid_.blocks_x;
  const std::size_t y_segments = static_cast<std::size_t>(grid_.blocks_x) * grid_.blocks_y;
  const std::size_t pick = rng_.below(x_segments + y_segments);
  JaywalkEvent e;
  e.id = next_id_++;
  e.spawn_time = at;
  e.street_axis = pick < x_segments ? Axis::X : Axis::Y;
  const std::size_t local = pick < x_segments ? pick : pick - x_segments;
  const int across = e.street_axis == Axis::X ? grid_.blocks_y : grid_.blocks_x;
  e.street = static_cast<int>(local % across);
  const int segment = static_cast<int>(local / across);
  double s = params_.spawn_in_intersections ? rng_.uniform(segment * pitch, (segment + 1) * pitch)
                                            : rng_.uniform(segment * pitch + half_street, (segment + 1) * pitch - half_street);
  const double side = rng_.bernoulli(0.5) ? 1.0 : -1.0;
  const double center = e.street * pitch;
  if (e.street_axis == Axis::X) {
    e.entry = {s, center + side * half_street, params_.target_height_m};
    e.direction = {0.0, -side, 0.0};
    e.street_dir = {1.0, 0.0, 0.0};
  } else {
    e.entry = {center + side * half_street, s, params_.target_height_m};
    e.direction = {-side, 0.0, 0.0};
    e.street_dir = {0.0, 1.0, 0.0};
  }
  e.speed = kmh_to_ms(params_.jaywalking_speed_kmh);
  e.crossing_length = grid_.street_width;
  return e;
}

}  // namespace densefog
