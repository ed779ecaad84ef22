// Copyright (C) 2026 The densefog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>

namespace densefog {

struct Aggregate {
  int n = 0;
  double mean = 0.0;
  std::optional<double> ci95_half;  // undefined for n < 2

  std::optional<double> low() const { return ci95_half ? std::optional(mean - *ci95_half) : std::nullopt; }
  std::optional<double> high() const { return ci95_half ? std::optional(mean + *ci95_half) : std::nullopt; }
};

/// Mean and Student-t 95% confidence half-width.
Aggregate aggregate(std::span<const double> values);

/// Spearman rank correlation with average ranks for ties. Undefined if
/// either series is constant or shorter than 2.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

}  // namespace densefog
