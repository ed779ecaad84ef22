// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "densefog/channel.hpp"
#include "densefog/rng.hpp"
#include "doctest.h"

using namespace densefog;

namespace {

constexpr double kFc = 28e9;

// Independent UMi street-canyon oracle written from the model definition
// with the breakpoint expressed through effective heights.
double oracle_pathloss(double d2d, double h1, double h2, bool nlos) {
  const double hb = std::max(h1, h2), hu = std::min(h1, h2);
  d2d = std::max(d2d, 1.0);
  const double d3d = std::hypot(d2d, hb - hu);
  const double hb_eff = hb - 1.0, hu_eff = hu - 1.0;
  const double dbp = 4.0 * hb_eff * hu_eff * kFc / 299792458.0;
  const double f = kFc / 1e9;
  const double pl1 = 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(f);
  const double pl2 = 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(f) - 9.5 * std::log10(dbp * dbp + (hb - hu) * (hb - hu));
  const double los = d2d <= dbp ? pl1 : pl2;
  if (!nlos) return los;
  const double pl_nlos = 35.3 * std::log10(d3d) + 22.4 + 21.3 * std::log10(f) - 0.3 * (hu - 1.5);
  return los > pl_nlos ? los : pl_nlos;
}

}  // namespace

TEST_CASE("pathloss_umi: frozen values at 28 GHz") {
  // Values computed by a separate script from the model equations.
  CHECK(breakpoint_distance(10.0, 1.4, kFc) == doctest::Approx(1344.9304).epsilon(1e-7));
  CHECK(pathloss_umi(100.0, 10.0, 1.4, kFc, false) == doctest::Approx(103.37676).epsilon(1e-7));
  CHECK(pathloss_umi(100.0, 10.0, 1.4, kFc, true) == doctest::Approx(123.91095).epsilon(1e-7));
  CHECK(pathloss_umi(50.0, 1.4, 1.4, kFc, false) == doctest::Approx(97.02153).epsilon(1e-7));
  CHECK(pathloss_umi(1000.0, 1.4, 1.4, kFc, false) == doctest::Approx(147.58933).epsilon(1e-7));
}

TEST_CASE("pathloss_umi matches the oracle over a sweep of geometries") {
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const double d = rng.uniform(0.0, 1500.0);
    const double h1 = rng.bernoulli(0.5) ? 10.0 : 1.4, h2 = rng.uniform(1.1, 2.0);
    const bool nlos = rng.bernoulli(0.5);
    CHECK(pathloss_umi(d, h1, h2, kFc, nlos) == doctest::Approx(oracle_pathloss(d, h1, h2, nlos)).epsilon(1e-12));
    // Endpoint order does not matter.
    CHECK(pathloss_umi(d, h1, h2, kFc, nlos) == pathloss_umi(d, h2, h1, kFc, nlos));
  }
}

TEST_CASE("pathloss_umi properties: NLoS >= LoS, monotone in distance, continuous at breakpoint") {
  for (double h : {1.4, 10.0}) {
    double prev_los = 0.0, prev_nlos = 0.0;
    for (double d = 1.0; d <= 2000.0; d += 0.5) {
      const double los = pathloss_umi(d, h, 1.4, kFc, false);
      const double nlos = pathloss_umi(d, h, 1.4, kFc, true);
      CHECK(nlos >= los);
      CHECK(los >= prev_los);
      CHECK(nlos >= prev_nlos);
      prev_los = los;
      prev_nlos = nlos;
    }
    const double bp = breakpoint_distance(h, 1.4, kFc);
    CHECK(std::abs(pathloss_umi(bp + 1e-9, h, 1.4, kFc, false) - pathloss_umi(bp, h, 1.4, kFc, false)) < 0.01);
  }
  // Below 1 m the distance is clamped.
  CHECK(pathloss_umi(0.0, 1.4, 1.4, kFc, false) == pathloss_umi(1.0, 1.4, 1.4, kFc, false));
}

TEST_CASE("noise and SNR bookkeeping") {
  CHECK(noise_power_dbm(500e6, 7.0) == doctest::Approx(-80.0103).epsilon(1e-6));
  // Doubling bandwidth raises noise by 10 log10 2 and lowers SNR by as much.
  SnrInputs in;
  in.tx_power_dbm = 20.0;
  in.pathloss_db = 100.0;
  in.bandwidth_hz = 100e6;
  in.noise_figure_db = 7.0;
  const double s1 = snr_db(in);
  in.bandwidth_hz = 200e6;
  CHECK(s1 - snr_db(in) == doctest::Approx(3.0103).epsilon(1e-4));
  in.blockage_db = 20.0;
  CHECK(s1 - snr_db(in) == doctest::Approx(23.0103).epsilon(1e-4));
}

TEST_CASE("capacity_bps: Shannon examples") {
  CHECK(capacity_bps(0.0, 1e6) == doctest::Approx(1e6));
  CHECK(capacity_bps(10.0 * std::log10(3.0), 1e6) == doctest::Approx(2e6));
  CHECK(capacity_bps(30.0, 0.0) == 0.0);
  CHECK(capacity_bps(30.0, -5.0) == 0.0);
}

TEST_CASE("link_budget: uplink at car power and V2V examples") {
  RadioParams r;
  const Point3 car{0, 0, 1.4}, bs{100, 0, 10};
  const LinkBudget ul = link_budget(car, EndpointKind::Vehicle, bs, EndpointKind::BaseStation, LosState::Clear, 500e6, r);
  // 20 dBm + 5 + 10 dBi - 103.3768 dB - (-80.0103 dBm)
  CHECK(ul.snr_db == doctest::Approx(11.633537).epsilon(1e-7));
  CHECK(ul.capacity_bps == doctest::Approx(1.980184e9).epsilon(1e-6));
  const LinkBudget v2v =
      link_budget(car, EndpointKind::Vehicle, {50, 0, 1.4}, EndpointKind::Vehicle, LosState::Clear, 500e6, r);
  CHECK(v2v.snr_db == doctest::Approx(12.988769).epsilon(1e-7));
  const LinkBudget blocked =
      link_budget(car, EndpointKind::Vehicle, {50, 0, 1.4}, EndpointKind::Vehicle, LosState::VehicleBlocked, 500e6, r);
  CHECK(v2v.snr_db - blocked.snr_db == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(v2v.pathloss_db == blocked.pathloss_db);
  // Direction does not matter.
  const LinkBudget dl = link_budget(bs, EndpointKind::BaseStation, car, EndpointKind::Vehicle, LosState::Clear, 500e6, r);
  CHECK(dl.snr_db == doctest::Approx(ul.snr_db).epsilon(1e-12));
}

TEST_CASE("reslice agrees with a fresh link_budget at the allocated bandwidth") {
  RadioParams r;
  const Point3 car{0, 0, 1.4}, bs{180, 40, 10};
  for (LosState los : {LosState::Clear, LosState::VehicleBlocked, LosState::BuildingBlocked}) {
    const LinkBudget full = link_budget(car, EndpointKind::Vehicle, bs, EndpointKind::BaseStation, los, 500e6, r);
    for (double bw : {500e6, 250e6, 17e6, 1e3}) {
      const LinkBudget direct = link_budget(car, EndpointKind::Vehicle, bs, EndpointKind::BaseStation, los, bw, r);
      const LinkBudget re = reslice(full, bw, r);
      CHECK(re.snr_db == doctest::Approx(direct.snr_db).epsilon(1e-10));
      CHECK(re.capacity_bps == doctest::Approx(direct.capacity_bps).epsilon(1e-10));
      CHECK(re.allocated_bandwidth_hz == bw);
    }
    // Standby: characterized over the full slice but carries nothing.
    const LinkBudget idle = reslice(full, 0.0, r);
    CHECK(idle.snr_db == full.snr_db);
    CHECK(idle.capacity_bps == 0.0);
  }
}

TEST_CASE("pair_shadowing_db: symmetric, seed-dependent, roughly N(0, sigma)") {
  CHECK(pair_shadowing_db(1, 3, 9, false) == pair_shadowing_db(1, 9, 3, false));
  CHECK(pair_shadowing_db(1, 3, 9, false) != pair_shadowing_db(2, 3, 9, false));
  double sum = 0.0, sq = 0.0;
  constexpr int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = pair_shadowing_db(7, i, i + 1, true);
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n, sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean) < 0.2);
  CHECK(sd == doctest::Approx(7.82).epsilon(0.03));
}
