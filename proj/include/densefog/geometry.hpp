// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace densefog {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Point3 operator*(Point3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr bool operator==(Point3 a, Point3 b) = default;
};

inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Point3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Point3 a, Point3 b) { return norm(a - b); }
inline double distance_2d(Point3 a, Point3 b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class ObstacleKind { Building, VehicleBody };

struct BoxObstacle {
  Point3 center;
  Point3 half_extents;
  ObstacleKind kind = ObstacleKind::Building;

  Point3 min() const { return center - half_extents; }
  Point3 max() const { return center + half_extents; }
  bool contains(Point3 p) const;
};

// Slab test of segment [a, b] against a closed box. The endpoints themselves
// never count as an intersection: only contact at some t in (0, 1) does.
bool segment_intersects_box(Point3 a, Point3 b, const BoxObstacle& box);

enum class LosState { Clear, BuildingBlocked, VehicleBlocked };

const char* to_string(LosState s);

struct DeploymentParams {
  double area_width_m = 400.0;
  double area_height_m = 400.0;
  double block_size_m = 100.0;  // street centerline pitch
  double street_width_m = 20.0;
  int lanes_per_street = 4;
  double sidewalk_width_m = 3.0;
  double building_height_min_m = 15.0;
  double building_height_max_m = 45.0;
  double isd_m = 200.0;
  double bs_height_m = 10.0;
  int bs_sectors = 3;
  double bs_downtilt_deg = 102.0;  // recorded only; sectors are used by azimuth
};

/// Manhattan street layout. Street centerlines run at k * block_size along
/// both axes, for k in [0, blocks_x) resp. [0, blocks_y); the area wraps as a
/// torus for mobility.
struct StreetGrid {
  double block_size = 100.0;
  double street_width = 20.0;
  int lanes = 4;
  int blocks_x = 0;
  int blocks_y = 0;

  double lane_width() const { return street_width / lanes; }
  int lanes_per_direction() const { return lanes / 2; }
  double extent_x() const { return block_size * blocks_x; }
  double extent_y() const { return block_size * blocks_y; }
  // Total street centerline length over both axes.
  double total_street_length() const { return blocks_y * extent_x() + blocks_x * extent_y(); }
};

struct BsSite {
  Point3 position;
  std::vector<double> sector_azimuth_deg;

  // Index of the sector whose azimuth is angularly closest to the bearing
  // of `p` as seen from the site.
  int sector_for(Point3 p) const;
};

struct Deployment {
  StreetGrid grid;
  std::vector<BoxObstacle> buildings;  // row-major by block: i * blocks_y + j
  std::vector<BsSite> bs_sites;

  const BoxObstacle& building_at(int i, int j) const { return buildings[static_cast<std::size_t>(i) * grid.blocks_y + j]; }
  bool building_blocked(Point3 a, Point3 b) const;
};

class DeploymentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Deployment build_deployment(const DeploymentParams& params, std::uint64_t seed);

/// Uniform-grid index over the per-tick vehicle boxes. Box ids are their
/// positions in the span given to rebuild().
class VehicleIndex {
 public:
  VehicleIndex() = default;
  VehicleIndex(const StreetGrid& grid, double cell_size = 10.0);

  void rebuild(std::span<const BoxObstacle> boxes, std::span<const Point3> velocities = {});

  std::span<const BoxObstacle> boxes() const { return boxes_; }

  // True if any box other than the excluded ids intersects [a, b]. With
  // tau > 0 every box is displaced by its velocity times tau first.
  bool blocks(Point3 a, Point3 b, std::span<const int> exclude, double tau = 0.0) const;

  // Calls f(id) for every box whose cell range overlaps the rectangle.
  // An id may be reported more than once.
  template <class F>
  void for_each_near(double x0, double y0, double x1, double y1, F&& f) const {
    int cx0 = cell_x(x0), cx1 = cell_x(x1), cy0 = cell_y(y0), cy1 = cell_y(y1);
    for (int cx = cx0; cx <= cx1; ++cx)
      for (int cy = cy0; cy <= cy1; ++cy) {
        std::size_t c = static_cast<std::size_t>(cx) * ny_ + cy;
        for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) f(static_cast<int>(ids_[k]));
      }
  }

 private:
  int cell_x(double x) const;
  int cell_y(double y) const;

  double origin_x_ = 0.0, origin_y_ = 0.0, cell_ = 10.0;
  int nx_ = 0, ny_ = 0;
  double top_ = 0.0;
  double max_speed_ = 0.0;
  std::vector<BoxObstacle> boxes_;
  std::vector<Point3> velocities_;
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> ids_;
};

/// Building blockage dominates vehicle blockage. `exclude` lists the vehicle
/// ids owning the endpoints (their bodies never block their own link).
LosState los_state(Point3 a, Point3 b, const Deployment& deployment, const VehicleIndex& vehicles,
                   std::span<const int> exclude);

}  // namespace densefog
