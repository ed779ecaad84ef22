// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "densefog/channel.hpp"
#include "densefog/geometry.hpp"
#include "densefog/kernels.hpp"
#include "densefog/mobility.hpp"

namespace densefog {

struct NetworkParams {
  int max_links = 3;
  bool proactive = true;
  double lookahead_horizon_s = 0.1;
  int prediction_samples = 1;
  double forwarding_delay_s = 0.001;
  double v2v_range_m = 60.0;
  double bs_range_m = 300.0;
  int v2v_candidates = 6;
  double min_link_snr_db = 0.0;
  double fill_retry_s = 0.1;
  double reselection_period_s = 1.0;
  double reselection_hysteresis_db = 3.0;
};

// ---------------------------------------------------------------------------
// Bandwidth

inline constexpr double kElasticDemand = std::numeric_limits<double>::infinity();

/// Max-min fair (water-filling) split of `capacity` among `demands`.
/// Infinite demands are elastic. Allocations never exceed their demand and
/// sum to at most the capacity.
std::vector<double> allocate_max_min(double capacity, std::span<const double> demands);

// ---------------------------------------------------------------------------
// Routing

struct Edge {
  int to = 0;
  double capacity_bps = 0.0;
};

using Graph = std::vector<std::vector<Edge>>;

struct RouteTree {
  int source = -1;
  std::vector<double> bottleneck_bps;  // 0 = unreachable; +inf at the source
  std::vector<double> latency_s;       // +inf = unreachable
  std::vector<int> hops;
  std::vector<int> parent;

  bool reachable(int node) const { return node == source || parent[node] >= 0; }
};

struct Route {
  std::vector<int> hops;  // node sequence, source first
  double bottleneck_bps = 0.0;
  double latency_s = 0.0;
};

/// Single-source widest (max-bottleneck) paths. When two labels for a node
/// are equally wide the one with fewer hops wins, then the lower predecessor
/// id. The hop preference is per label, not a global minimum-hop guarantee.
/// Per-hop latency is forwarding_delay + payload_bits / hop capacity.
RouteTree widest_paths(const Graph& graph, int source, double forwarding_delay_s, double payload_bits);

Route route_to(const RouteTree& tree, const Graph& graph, int destination, double forwarding_delay_s,
               double payload_bits);

// ---------------------------------------------------------------------------
// Links and the oracle

enum class LinkRole { Active, Backup };

/// Undirected association. `a` is always a vehicle; `b` is a vehicle or a
/// base-station site node (vehicle_count + site index) with `sector` set.
struct Link {
  int a = -1;
  int b = -1;
  int sector = -1;
  LinkBudget budget;      // at the allocated bandwidth
  LinkBudget full_slice;  // current state over the whole slice
  LosState selected_los = LosState::Clear;  // best state seen since selection
  LosState predicted_los = LosState::Clear;
  double score_db = 0.0;  // SNR over the full slice at the worst predicted state
  double established_at = 0.0;

  bool to_bs() const { return sector >= 0; }
};

struct OracleTickStats {
  std::int64_t outage_ticks = 0;    // vehicles whose active link was blocked at tick start
  std::int64_t isolated_ticks = 0;  // vehicles left with no usable link
  std::int64_t link_count = 0;
  std::int64_t reselections = 0;
};

/// Snapshot of the mobile world the oracle observes on a tick.
struct WorldView {
  std::span<const VehiclePose> vehicles;
  const VehicleIndex* index = nullptr;
  double t = 0.0;
  double dt = 0.01;
};

/// Centralized controller with global link-state knowledge. Each tick it
/// re-evaluates every link, drops links that are (or, when proactive, are
/// predicted to become) blocked, and greedily fills free link slots by
/// predicted SNR. Base-station sectors share the slice max-min among the
/// vehicles whose active link they carry.
class Oracle {
 public:
  Oracle(const Deployment& deployment, const RadioParams& radio, const NetworkParams& params,
         std::uint64_t seed = 0);

  void update(const WorldView& view, OracleTickStats& stats);
  void allocate_bandwidth();

  const std::vector<Link>& links() const { return links_; }
  std::vector<int> links_of(int vehicle) const;
  int degree(int vehicle) const;
  int active_link(int vehicle) const { return active_[vehicle]; }
  LinkRole role(std::size_t link_index) const;

  int vehicle_count() const { return static_cast<int>(vehicle_count_); }
  int node_count() const { return static_cast<int>(vehicle_count_ + deployment_->bs_sites.size()); }
  int site_node(int site) const { return static_cast<int>(vehicle_count_) + site; }
  bool is_site(int node) const { return node >= static_cast<int>(vehicle_count_); }

  /// Graph of links that currently carry capacity (backup BS links are
  /// zero-bandwidth standby and are left out).
  const Graph& routing_graph() const;

  /// Maximum number of links a vehicle currently has with any node.
  int max_vehicle_degree() const;

 private:
  struct Candidate {
    int node;
    int sector;
    LosState now;
    LosState worst;
    double score;
  };

  SegmentQuery query_for(int a, int b) const;
  LinkBudget full_slice_budget(int a, int b, LosState state) const;
  std::vector<Candidate> candidates_for(int v, const WorldView& view) const;
  bool linked(int v, int node) const;
  void add_link(int v, const Candidate& c, double t);
  void remove_links(std::vector<std::uint8_t>& drop);
  void choose_active();

  const Deployment* deployment_;
  RadioParams radio_;
  NetworkParams params_;
  std::uint64_t seed_;

  std::size_t vehicle_count_ = 0;
  WorldView view_;
  std::vector<Link> links_;
  std::vector<std::vector<int>> incident_;  // vehicle -> link indices
  std::vector<int> active_;
  std::vector<double> next_fill_;
  std::vector<double> next_reselect_;
  bool initialized_ = false;

  mutable Graph graph_;
  mutable bool graph_valid_ = false;
};

/// True iff the segment of `link` is blocked (by buildings or bodies) at any
/// sampled instant within `horizon` seconds, with all motion extrapolated
/// linearly. horizon 0 reports the current state.
bool predict_blockage(const SegmentQuery& link, double horizon, int samples, const Deployment& deployment,
                      const VehicleIndex& vehicles);

}  // namespace densefog
