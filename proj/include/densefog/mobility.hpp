// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "densefog/geometry.hpp"
#include "densefog/rng.hpp"

namespace densefog {

inline constexpr double kmh_to_ms(double kmh) { return kmh / 3.6; }

struct MobilityParams {
  double driving_speed_kmh = 40.0;
  double density_per_100m = 50.0;  // vehicles per 100 m of (all-lane) street
  double vehicle_length_m = 4.8;
  double vehicle_width_m = 1.8;
  double vehicle_height_m = 1.4;
  double transceiver_height_m = 1.4;
  double spacing_jitter = 0.5;  // fraction of the mean gap
};

enum class Axis { X, Y };

/// Position is the windshield reference: front-center of the body at
/// transceiver height. Vehicles only ever move along lane centerlines.
struct VehiclePose {
  int id = 0;
  Point3 position;
  Point3 heading;  // unit, axis-aligned
  double speed = 0.0;
  int lane = 0;  // 0 = innermost lane of its direction

  Axis axis = Axis::X;
  int street = 0;  // centerline index across the axis
  int dir = 1;     // +1 / -1 along the axis
  double s = 0.0;  // coordinate along the axis, in [0, extent)
};

std::size_t fleet_size(const StreetGrid& grid, double density_per_100m);

Point3 lane_position(const StreetGrid& grid, Axis axis, int street, int dir, int lane, double s, double height);

std::vector<VehiclePose> spawn_fleet(const StreetGrid& grid, const MobilityParams& params, Rng& rng);

/// Advance every vehicle by speed * dt. A turn (straight/left/right,
/// uniform) is drawn each time an intersection is crossed; leaving the area
/// wraps around.
void step_vehicles(std::span<VehiclePose> vehicles, const StreetGrid& grid, double dt, Rng& turns,
                   double transceiver_height);

BoxObstacle vehicle_box(const VehiclePose& v, const MobilityParams& params);

inline Point3 velocity(const VehiclePose& v) { return v.heading * v.speed; }

struct JaywalkParams {
  double jaywalking_speed_kmh = 10.0;
  double jaywalking_intensity_per_min = 1.0;
  double target_height_m = 1.0;
  bool spawn_in_intersections = false;
};

struct JaywalkEvent {
  int id = 0;
  double spawn_time = 0.0;
  Point3 entry;       // on the curb
  Point3 direction;   // unit, perpendicular to the street
  Point3 street_dir;  // unit, along the street
  double speed = 0.0;
  double crossing_length = 0.0;
  Axis street_axis = Axis::X;
  int street = 0;

  double end_time() const { return spawn_time + crossing_length / speed; }
  bool active_at(double t) const { return t >= spawn_time && t < end_time(); }
  Point3 position_at(double t) const;
};

/// Poisson arrivals over the whole area, located uniformly by street length.
class JaywalkProcess {
 public:
  JaywalkProcess(const StreetGrid& grid, const JaywalkParams& params, Rng rng);

  // Events whose spawn time lies in (t - dt, t]. Arrivals are generated in
  // continuous time; inter-arrival gaps are exactly exponential.
  std::vector<JaywalkEvent> spawn(double t, double dt);

 private:
  JaywalkEvent make_event(double at);

  StreetGrid grid_;
  JaywalkParams params_;
  Rng rng_;
  double rate_per_s_ = 0.0;
  double next_arrival_ = 0.0;
  int next_id_ = 0;
};

}  // namespace densefog
