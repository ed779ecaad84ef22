// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include "densefog/connectivity.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <tuple>

namespace densefog {

std::vector<double> allocate_max_min(double capacity, std::span<const double> demands) {
  std::vector<double> out(demands.size(), 0.0);
  if (demands.empty()) return out;
  if (std::all_of(demands.begin(), demands.end(), [&](double d) { return d == demands.front(); })) {
    const double share = std::max(capacity, 0.0) / static_cast<double>(demands.size());
    std::fill(out.begin(), out.end(), std::min(std::max(demands.front(), 0.0), share));
    return out;
  }
  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return demands[i] < demands[j]; });
  double remaining = std::max(capacity, 0.0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double share = remaining / static_cast<double>(order.size() - k);
    const double give = std::min(std::max(demands[order[k]], 0.0), share);
    out[order[k]] = give;
    remaining = std::max(remaining - give, 0.0);
  }
  return out;
}

RouteTree widest_paths(const Graph& graph, int source, double forwarding_delay_s, double payload_bits) {
  const std::size_t n = graph.size();
  RouteTree tree;
  tree.source = source;
  tree.bottleneck_bps.assign(n, 0.0);
  tree.latency_s.assign(n, std::numeric_limits<double>::infinity());
  tree.hops.assign(n, std::numeric_limits<int>::max());
  tree.parent.assign(n, -1);
  if (source < 0 || static_cast<std::size_t>(source) >= n) return tree;
  tree.bottleneck_bps[source] = std::numeric_limits<double>::infinity();
  tree.latency_s[source] = 0.0;
  tree.hops[source] = 0;

  // Max-heap on (bottleneck, -hops, -node).
  using Entry = std::tuple<double, int, int>;
  std::priority_queue<Entry> heap;
  heap.emplace(tree.bottleneck_bps[source], 0, -source);
  std::vector<std::uint8_t> done(n, 0);
  while (!heap.empty()) {
    auto [b, neg_h, neg_u] = heap.top();
    heap.pop();
    const int u = -neg_u;
    if (done[u]) continue;
    done[u] = 1;
    for (const Edge& e : graph[u]) {
      if (e.capacity_bps <= 0.0 || done[e.to]) continue;
      const double nb = std::min(b, e.capacity_bps);
      const int nh = -neg_h + 1;
      const bool better = nb > tree.bottleneck_bps[e.to] ||
                          (nb == tree.bottleneck_bps[e.to] &&
                           (nh < tree.hops[e.to] || (nh == tree.hops[e.to] && u < tree.parent[e.to])));
      if (!better) continue;
      tree.bottleneck_bps[e.to] = nb;
      tree.hops[e.to] = nh;
      tree.parent[e.to] = u;
      tree.latency_s[e.to] = tree.latency_s[u] + forwarding_delay_s + payload_bits / e.capacity_bps;
      heap.emplace(nb, -nh, -e.to);
    }
  }
  return tree;
}

Route route_to(const RouteTree& tree, const Graph& graph, int destination, double forwarding_delay_s,
               double payload_bits) {
  Route r;
  if (!tree.reachable(destination)) return r;
  for (int v = destination; v >= 0; v = tree.parent[v]) {
    r.hops.push_back(v);
    if (v == tree.source) break;
  }
  std::reverse(r.hops.begin(), r.hops.end());
  r.bottleneck_bps = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < r.hops.size(); ++k) {
    double cap = 0.0;
    for (const Edge& e : graph[r.hops[k - 1]])
      if (e.to == r.hops[k]) cap = std::max(cap, e.capacity_bps);
    r.bottleneck_bps = std::min(r.bottleneck_bps, cap);
    r.latency_s += forwarding_delay_s + payload_bits / cap;
  }
  return r;
}

bool predict_blockage(const SegmentQuery& link, double horizon, int samples, const Deployment& deployment,
                      const VehicleIndex& vehicles) {
  return sweep_segment(link, horizon, samples, deployment, vehicles).worst != LosState::Clear;
}

// ---------------------------------------------------------------------------

Oracle::Oracle(const Deployment& deployment, const RadioParams& radio, const NetworkParams& params,
               std::uint64_t seed)
    : deployment_(&deployment), radio_(radio), params_(params), seed_(seed) {}

std::vector<int> Oracle::links_of(int vehicle) const { return incident_[vehicle]; }

int Oracle::degree(int vehicle) const { return static_cast<int>(incident_[vehicle].size()); }

LinkRole Oracle::role(std::size_t link_index) const {
  const Link& l = links_[link_index];
  const auto idx = static_cast<int>(link_index);
  if (active_[l.a] == idx) return LinkRole::Active;
  if (!l.to_bs() && active_[l.b] == idx) return LinkRole::Active;
  return LinkRole::Backup;
}

int Oracle::max_vehicle_degree() const {
  int d = 0;
  for (const auto& inc : incident_) d = std::max(d, static_cast<int>(inc.size()));
  return d;
}

bool Oracle::linked(int v, int node) const {
  for (int li : incident_[v]) {
    const Link& l = links_[li];
    if ((l.a == v && l.b == node) || (l.b == v && l.a == node)) return true;
  }
  return false;
}

SegmentQuery Oracle::query_for(int a, int b) const {
  SegmentQuery q;
  const auto& va = view_.vehicles[a];
  q.a = va.position;
  q.velocity_a = velocity(va);
  q.owner_a = a;
  if (is_site(b)) {
    q.b = deployment_->bs_sites[b - vehicle_count_].position;
  } else {
    const auto& vb = view_.vehicles[b];
    q.b = vb.position;
    q.velocity_b = velocity(vb);
    q.owner_b = b;
  }
  return q;
}

LinkBudget Oracle::full_slice_budget(int a, int b, LosState state) const {
  const bool bs = is_site(b);
  const Point3 pa = view_.vehicles[a].position;
  const Point3 pb = bs ? deployment_->bs_sites[b - vehicle_count_].position : view_.vehicles[b].position;
  const double shadow =
      radio_.shadow_fading ? pair_shadowing_db(seed_, a, b, state == LosState::BuildingBlocked) : 0.0;
  return link_budget(pa, EndpointKind::Vehicle, pb, bs ? EndpointKind::BaseStation : EndpointKind::Vehicle, state,
                     radio_.system_bandwidth_hz, radio_, shadow);
}

void Oracle::add_link(int v, const Candidate& c, double t) {
  Link l;
  l.a = v;
  l.b = c.node;
  l.sector = c.sector;
  l.selected_los = params_.proactive ? c.worst : c.now;
  l.predicted_los = c.worst;
  l.score_db = c.score;
  l.established_at = t;
  l.full_slice = full_slice_budget(v, c.node, c.now);
  l.budget = l.full_slice;
  const int idx = static_cast<int>(links_.size());
  links_.push_back(l);
  incident_[v].push_back(idx);
  if (!is_site(c.node)) incident_[c.node].push_back(idx);
}

void Oracle::remove_links(std::vector<std::uint8_t>& drop) {
  if (std::find(drop.begin(), drop.end(), 1) == drop.end()) return;
  std::vector<int> remap(links_.size(), -1);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    if (drop[i]) continue;
    remap[i] = static_cast<int>(kept);
    if (kept != i) links_[kept] = std::move(links_[i]);
    ++kept;
  }
  links_.resize(kept);
  for (auto& inc : incident_) {
    std::size_t w = 0;
    for (int li : inc)
      if (remap[li] >= 0) inc[w++] = remap[li];
    inc.resize(w);
  }
  for (auto& a : active_) a = a >= 0 ? remap[a] : -1;
  drop.assign(links_.size(), 0);
}

std::vector<Oracle::Candidate> Oracle::candidates_for(int v, const WorldView& view) const {
  // Geometry-only candidate list; classification happens in bulk by the caller.
  std::vector<Candidate> out;
  const Point3 p = view.vehicles[v].position;
  for (std::size_t s = 0; s < deployment_->bs_sites.size(); ++s) {
    const auto& site = deployment_->bs_sites[s];
    const int node = site_node(static_cast<int>(s));
    if (distance_2d(p, site.position) > params_.bs_range_m || linked(v, node)) continue;
    out.push_back({node, site.sector_for(p), LosState::Clear, LosState::Clear, 0.0});
  }
  const double r = params_.v2v_range_m;
  std::vector<std::pair<double, int>> near;
  std::vector<int> seen;
  view.index->for_each_near(p.x - r, p.y - r, p.x + r, p.y + r, [&](int id) { seen.push_back(id); });
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (int id : seen) {
    if (id == v || degree(id) >= params_.max_links || linked(v, id)) continue;
    const double d = distance_2d(p, view.vehicles[id].position);
    if (d <= r) near.emplace_back(d, id);
  }
  const std::size_t k = std::min<std::size_t>(near.size(), static_cast<std::size_t>(params_.v2v_candidates));
  std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(k), near.end());
  for (std::size_t i = 0; i < k; ++i) out.push_back({near[i].second, -1, LosState::Clear, LosState::Clear, 0.0});
  return out;
}

void Oracle::choose_active() {
  for (std::size_t v = 0; v < vehicle_count_; ++v) {
    int best = -1;
    for (int li : incident_[v]) {
      if (best < 0) {
        best = li;
        continue;
      }
      const Link& l = links_[li];
      const Link& b = links_[best];
      const int other_l = l.a == static_cast<int>(v) ? l.b : l.a;
      const int other_b = b.a == static_cast<int>(v) ? b.b : b.a;
      if (l.score_db > b.score_db || (l.score_db == b.score_db && other_l < other_b)) best = li;
    }
    active_[v] = best;
  }
}

void Oracle::update(const WorldView& view, OracleTickStats& stats) {
  view_ = view;
  const double t = view.t;
  if (!initialized_ || view.vehicles.size() != vehicle_count_) {
    vehicle_count_ = view.vehicles.size();
    links_.clear();
    incident_.assign(vehicle_count_, {});
    active_.assign(vehicle_count_, -1);
    next_fill_.assign(vehicle_count_, t);
    next_reselect_.resize(vehicle_count_);
    // Stagger periodic reselection over the period.
    for (std::size_t v = 0; v < vehicle_count_; ++v)
      next_reselect_[v] = t + params_.reselection_period_s * static_cast<double>(v % 100) / 100.0;
    initialized_ = true;
  }
  graph_valid_ = false;
  const double horizon = params_.proactive ? params_.lookahead_horizon_s : 0.0;

  // 1. Re-evaluate existing links.
  std::vector<SegmentQuery> queries(links_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) queries[i] = query_for(links_[i].a, links_[i].b);
  std::vector<SegmentState> states(links_.size());
  classify_segments_parallel(queries, horizon, params_.prediction_samples, *deployment_, *view.index, states);

  // 2. Outage: the active link chosen last tick is blocked now.
  for (std::size_t v = 0; v < vehicle_count_; ++v)
    if (active_[v] >= 0 && states[active_[v]].now != LosState::Clear) ++stats.outage_ticks;

  // 3. Drop links that degraded (or are about to).
  std::vector<std::uint8_t> drop(links_.size(), 0);
  for (std::size_t i = 0; i < links_.size(); ++i) {
    Link& l = links_[i];
    l.predicted_los = states[i].worst;
    const LosState decisive = params_.proactive ? states[i].worst : states[i].now;
    l.full_slice = full_slice_budget(l.a, l.b, states[i].now);
    l.budget = l.full_slice;
    l.score_db = decisive == states[i].now ? l.full_slice.snr_db : full_slice_budget(l.a, l.b, decisive).snr_db;
    const double range = l.to_bs() ? params_.bs_range_m : params_.v2v_range_m;
    const double d = distance_2d(queries[i].a, queries[i].b);
    if (severity(decisive) > severity(l.selected_los) || d > range || l.score_db < params_.min_link_snr_db) {
      drop[i] = 1;
      next_fill_[l.a] = t;
      if (!l.to_bs()) next_fill_[l.b] = t;
    } else if (severity(states[i].now) < severity(l.selected_los)) {
      l.selected_los = states[i].now;
    }
  }
  remove_links(drop);

  // 4./5. Periodic reselection and greedy fill share one bulk candidate
  // classification.
  std::vector<int> due;
  std::vector<std::uint8_t> reselecting(vehicle_count_, 0);
  for (std::size_t v = 0; v < vehicle_count_; ++v) {
    const bool reselect = next_reselect_[v] <= t;
    if (reselect) {
      next_reselect_[v] += params_.reselection_period_s;
      reselecting[v] = degree(static_cast<int>(v)) >= params_.max_links;
    }
    if (reselecting[v] || (degree(static_cast<int>(v)) < params_.max_links && next_fill_[v] <= t))
      due.push_back(static_cast<int>(v));
  }
  std::vector<std::vector<Candidate>> cands(due.size());
  std::vector<SegmentQuery> cq;
  for (std::size_t k = 0; k < due.size(); ++k) {
    cands[k] = candidates_for(due[k], view);
    for (const auto& c : cands[k]) cq.push_back(query_for(due[k], c.node));
  }
  std::vector<SegmentState> cs(cq.size());
  classify_segments_parallel(cq, horizon, params_.prediction_samples, *deployment_, *view.index, cs);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < due.size(); ++k) {
    for (auto& c : cands[k]) {
      c.now = cs[pos].now;
      c.worst = cs[pos].worst;
      c.score = full_slice_budget(due[k], c.node, params_.proactive ? c.worst : c.now).snr_db;
      ++pos;
    }
    std::stable_sort(cands[k].begin(), cands[k].end(), [](const Candidate& x, const Candidate& y) {
      return x.score > y.score || (x.score == y.score && x.node < y.node);
    });
    std::erase_if(cands[k], [&](const Candidate& c) { return c.score < params_.min_link_snr_db; });
  }

  for (std::size_t k = 0; k < due.size(); ++k) {
    const int v = due[k];
    if (!reselecting[v] || cands[k].empty()) continue;
    int worst = -1;
    for (int li : incident_[v])
      if (worst < 0 || links_[li].score_db < links_[worst].score_db) worst = li;
    if (worst >= 0 && cands[k].front().score > links_[worst].score_db + params_.reselection_hysteresis_db) {
      const Link& l = links_[worst];
      if (!l.to_bs()) next_fill_[l.a == v ? l.b : l.a] = t;
      drop[worst] = 1;
      ++stats.reselections;
    } else {
      reselecting[v] = 0;
    }
  }
  remove_links(drop);

  for (std::size_t k = 0; k < due.size(); ++k) {
    const int v = due[k];
    for (const auto& c : cands[k]) {
      if (degree(v) >= params_.max_links) break;
      if (!is_site(c.node) && degree(c.node) >= params_.max_links) continue;
      if (linked(v, c.node)) continue;
      add_link(v, c, t);
    }
    if (degree(v) < params_.max_links) next_fill_[v] = t + params_.fill_retry_s;
  }

  choose_active();
  for (std::size_t v = 0; v < vehicle_count_; ++v)
    if (incident_[v].empty()) ++stats.isolated_ticks;
  stats.link_count += static_cast<std::int64_t>(links_.size());
}

void Oracle::allocate_bandwidth() {
  const std::size_t sites = deployment_->bs_sites.size();
  // Streams per (site, sector): vehicles whose active link is that sector.
  std::vector<std::vector<int>> streams;
  std::vector<int> sector_base(sites + 1, 0);
  for (std::size_t s = 0; s < sites; ++s)
    sector_base[s + 1] = sector_base[s] + static_cast<int>(deployment_->bs_sites[s].sector_azimuth_deg.size());
  streams.assign(static_cast<std::size_t>(sector_base[sites]), {});
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    if (l.to_bs() && active_[l.a] == static_cast<int>(i))
      streams[sector_base[l.b - vehicle_count_] + l.sector].push_back(static_cast<int>(i));
  }
  std::vector<double> bandwidth(links_.size(), radio_.system_bandwidth_hz);
  for (const auto& sector : streams) {
    if (sector.empty()) continue;
    std::vector<double> demands(sector.size(), kElasticDemand);
    auto share = allocate_max_min(radio_.system_bandwidth_hz, demands);
    for (std::size_t k = 0; k < sector.size(); ++k) bandwidth[sector[k]] = share[k];
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    Link& l = links_[i];
    if (l.to_bs() && active_[l.a] != static_cast<int>(i)) bandwidth[i] = 0.0;  // standby
    l.budget = reslice(l.full_slice, bandwidth[i], radio_);
  }
  graph_valid_ = false;
}

const Graph& Oracle::routing_graph() const {
  if (graph_valid_) return graph_;
  graph_.assign(static_cast<std::size_t>(node_count()), {});
  for (const Link& l : links_) {
    if (l.budget.capacity_bps <= 0.0) continue;
    graph_[l.a].push_back({l.b, l.budget.capacity_bps});
    graph_[l.b].push_back({l.a, l.budget.capacity_bps});
  }
  graph_valid_ = true;
  return graph_;
}

}  // namespace densefog
