// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include "densefog/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <tuple>

#include "densefog/rng.hpp"

namespace densefog {

bool BoxObstacle::contains(Point3 p) const {
  Point3 lo = min(), hi = max();
  return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
}

namespace {

bool lex_less(Point3 a, Point3 b) { return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z); }

bool slab(double p, double d, double lo, double hi, double& t_lo, double& t_hi) {
  if (d == 0.0) return p >= lo && p <= hi;
  double t1 = (lo - p) / d;
  double t2 = (hi - p) / d;
  if (t1 > t2) std::swap(t1, t2);
  t_lo = std::max(t_lo, t1);
  t_hi = std::min(t_hi, t2);
  return true;
}

}  // namespace

bool segment_intersects_box(Point3 a, Point3 b, const BoxObstacle& box) {
  // Evaluate in a canonical endpoint order so the result is exactly symmetric.
  if (lex_less(b, a)) std::swap(a, b);
  const Point3 lo = box.min(), hi = box.max(), d = b - a;
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();
  if (!slab(a.x, d.x, lo.x, hi.x, t_lo, t_hi)) return false;
  if (!slab(a.y, d.y, lo.y, hi.y, t_lo, t_hi)) return false;
  if (!slab(a.z, d.z, lo.z, hi.z, t_lo, t_hi)) return false;
  if (t_lo > t_hi) return false;
  return t_hi > 0.0 && t_lo < 1.0;
}

const char* to_string(LosState s) {
  switch (s) {
    case LosState::Clear: return "clear";
    case LosState::BuildingBlocked: return "building";
    case LosState::VehicleBlocked: return "vehicle";
  }
  return "?";
}

int BsSite::sector_for(Point3 p) const {
  double bearing = std::atan2(p.y - position.y, p.x - position.x) * 180.0 / std::numbers::pi;
  int best = 0;
  double best_gap = 1e9;
  for (std::size_t s = 0; s < sector_azimuth_deg.size(); ++s) {
    double gap = std::fmod(std::abs(bearing - sector_azimuth_deg[s]), 360.0);
    gap = std::min(gap, 360.0 - gap);
    if (gap < best_gap) {
      best_gap = gap;
      best = static_cast<int>(s);
    }
  }
  return best;
}

bool Deployment::building_blocked(Point3 a, Point3 b) const {
  const double p = grid.block_size;
  // Both ends strictly inside one street (between the curbs): the strip is
  // convex and free of buildings.
  const double half = grid.street_width / 2.0;
  const double kya = std::round(a.y / p), kxa = std::round(a.x / p);
  if (kya == std::round(b.y / p) && std::abs(a.y - kya * p) < half && std::abs(b.y - kya * p) < half) return false;
  if (kxa == std::round(b.x / p) && std::abs(a.x - kxa * p) < half && std::abs(b.x - kxa * p) < half) return false;
  int i0 = std::clamp(static_cast<int>(std::floor(std::min(a.x, b.x) / p)), 0, grid.blocks_x - 1);
  int i1 = std::clamp(static_cast<int>(std::floor(std::max(a.x, b.x) / p)), 0, grid.blocks_x - 1);
  int j0 = std::clamp(static_cast<int>(std::floor(std::min(a.y, b.y) / p)), 0, grid.blocks_y - 1);
  int j1 = std::clamp(static_cast<int>(std::floor(std::max(a.y, b.y) / p)), 0, grid.blocks_y - 1);
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j)
      if (segment_intersects_box(a, b, building_at(i, j))) return true;
  return false;
}

Deployment build_deployment(const DeploymentParams& params, std::uint64_t seed) {
  const double pitch = params.block_size_m;
  if (!(pitch > 0.0) || !(params.street_width_m > 0.0) || params.lanes_per_street < 2 ||
      params.lanes_per_street % 2 != 0)
    throw DeploymentError("block size and street width must be positive, lanes even and >= 2");
  if (params.street_width_m + 2.0 * params.sidewalk_width_m >= pitch)
    throw DeploymentError("streets and sidewalks leave no room for buildings");
  if (params.area_width_m < pitch || params.area_height_m < pitch)
    throw DeploymentError("area is smaller than one block");
  if (!(params.isd_m > 0.0) || params.area_width_m < params.isd_m || params.area_height_m < params.isd_m)
    throw DeploymentError("area is smaller than one inter-site distance");
  const double bx = params.area_width_m / pitch, by = params.area_height_m / pitch;
  if (std::abs(bx - std::round(bx)) > 1e-9 || std::abs(by - std::round(by)) > 1e-9)
    throw DeploymentError("area must be a whole number of blocks");
  if (!(params.building_height_min_m > 0.0) || params.building_height_max_m < params.building_height_min_m)
    throw DeploymentError("invalid building height range");
  if (!(params.bs_height_m > 0.0) || params.bs_sectors < 1) throw DeploymentError("invalid base station layout");

  Deployment dep;
  dep.grid = StreetGrid{pitch, params.street_width_m, params.lanes_per_street, static_cast<int>(std::lround(bx)),
                        static_cast<int>(std::lround(by))};

  Rng rng = substream(seed, "buildings");
  const double inset = params.street_width_m / 2.0 + params.sidewalk_width_m;
  const double half_footprint = pitch / 2.0 - inset;
  dep.buildings.reserve(static_cast<std::size_t>(dep.grid.blocks_x) * dep.grid.blocks_y);
  for (int i = 0; i < dep.grid.blocks_x; ++i)
    for (int j = 0; j < dep.grid.blocks_y; ++j) {
      double h = rng.uniform(params.building_height_min_m, params.building_height_max_m);
      dep.buildings.push_back(BoxObstacle{{(i + 0.5) * pitch, (j + 0.5) * pitch, h / 2.0},
                                          {half_footprint, half_footprint, h / 2.0},
                                          ObstacleKind::Building});
    }

  // Sector boresights avoid the four street directions.
  std::vector<double> azimuths;
  for (int s = 0; s < params.bs_sectors; ++s) azimuths.push_back(45.0 + 360.0 * s / params.bs_sectors);

  auto snap = [&](double v) {
    // Keep the site on a street intersection when the lattice point falls
    // inside a block.
    double k = std::round(v / pitch);
    return std::abs(v - k * pitch) <= params.street_width_m / 2.0 ? v : k * pitch;
  };
  for (double x = params.isd_m / 2.0; x < params.area_width_m; x += params.isd_m)
    for (double y = params.isd_m / 2.0; y < params.area_height_m; y += params.isd_m)
      dep.bs_sites.push_back(BsSite{{snap(x), snap(y), params.bs_height_m}, azimuths});
  return dep;
}

VehicleIndex::VehicleIndex(const StreetGrid& grid, double cell_size) : cell_(cell_size) {
  const double margin = grid.street_width + cell_size;
  origin_x_ = -margin;
  origin_y_ = -margin;
  nx_ = static_cast<int>(std::ceil((grid.extent_x() + 2 * margin) / cell_)) + 1;
  ny_ = static_cast<int>(std::ceil((grid.extent_y() + 2 * margin) / cell_)) + 1;
  start_.assign(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
}

int VehicleIndex::cell_x(double x) const {
  return std::clamp(static_cast<int>(std::floor((x - origin_x_) / cell_)), 0, nx_ - 1);
}

int VehicleIndex::cell_y(double y) const {
  return std::clamp(static_cast<int>(std::floor((y - origin_y_) / cell_)), 0, ny_ - 1);
}

void VehicleIndex::rebuild(std::span<const BoxObstacle> boxes, std::span<const Point3> velocities) {
  boxes_.assign(boxes.begin(), boxes.end());
  velocities_.assign(velocities.begin(), velocities.end());
  velocities_.resize(boxes_.size(), Point3{});
  top_ = 0.0;
  max_speed_ = 0.0;
  for (const auto& v : velocities_) max_speed_ = std::max(max_speed_, std::hypot(v.x, v.y));

  const std::size_t cells = static_cast<std::size_t>(nx_) * ny_;
  std::vector<std::uint32_t> counts(cells + 1, 0);
  auto for_cells = [&](const BoxObstacle& b, auto&& f) {
    Point3 lo = b.min(), hi = b.max();
    for (int cx = cell_x(lo.x); cx <= cell_x(hi.x); ++cx)
      for (int cy = cell_y(lo.y); cy <= cell_y(hi.y); ++cy) f(static_cast<std::size_t>(cx) * ny_ + cy);
  };
  for (const auto& b : boxes_) {
    top_ = std::max(top_, b.max().z);
    for_cells(b, [&](std::size_t c) { ++counts[c + 1]; });
  }
  start_.assign(cells + 1, 0);
  for (std::size_t c = 0; c < cells; ++c) start_[c + 1] = start_[c] + counts[c + 1];
  ids_.assign(start_[cells], 0);
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t id = 0; id < boxes_.size(); ++id)
    for_cells(boxes_[id], [&](std::size_t c) { ids_[fill[c]++] = static_cast<std::uint32_t>(id); });
}

bool VehicleIndex::blocks(Point3 a, Point3 b, std::span<const int> exclude, double tau) const {
  if (boxes_.empty()) return false;
  // Only the part of the segment below the tallest roof can touch a body.
  double t0 = 0.0, t1 = 1.0;
  const double dz = b.z - a.z;
  if (dz != 0.0) {
    double t_top = (top_ - a.z) / dz;
    if (dz > 0) t1 = std::min(t1, t_top);
    else t0 = std::max(t0, t_top);
  } else if (a.z > top_) {
    return false;
  }
  if (t0 > t1) return false;
  Point3 p0 = a + (b - a) * t0, p1 = a + (b - a) * t1;
  const double pad = max_speed_ * tau;
  const double x0 = std::min(p0.x, p1.x) - pad, x1 = std::max(p0.x, p1.x) + pad;
  const double y0 = std::min(p0.y, p1.y) - pad, y1 = std::max(p0.y, p1.y) + pad;

  bool hit = false;
  int cx0 = cell_x(x0), cx1 = cell_x(x1), cy0 = cell_y(y0), cy1 = cell_y(y1);
  for (int cx = cx0; cx <= cx1 && !hit; ++cx)
    for (int cy = cy0; cy <= cy1 && !hit; ++cy) {
      std::size_t c = static_cast<std::size_t>(cx) * ny_ + cy;
      for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
        int id = static_cast<int>(ids_[k]);
        if (std::find(exclude.begin(), exclude.end(), id) != exclude.end()) continue;
        BoxObstacle box = boxes_[id];
        if (tau != 0.0) box.center = box.center + velocities_[id] * tau;
        if (segment_intersects_box(a, b, box)) {
          hit = true;
          break;
        }
      }
    }
  return hit;
}

LosState los_state(Point3 a, Point3 b, const Deployment& deployment, const VehicleIndex& vehicles,
                   std::span<const int> exclude) {
  if (deployment.building_blocked(a, b)) return LosState::BuildingBlocked;
  if (vehicles.blocks(a, b, exclude)) return LosState::VehicleBlocked;
  return LosState::Clear;
}

}  // namespace densefog
