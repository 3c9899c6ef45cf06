// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hyperspline/interpolator.hpp"

namespace hyperspline::cli {

enum class BenchMode { Cold, Warm };

struct PathTiming {
  std::size_t points = 0;
  double seconds = 0.0;
  double points_per_second = 0.0;
  double p50_ns = 0.0;
  double p90_ns = 0.0;
  double p99_ns = 0.0;
  /// Sum of every output, in query order.
  double checksum = 0.0;
};

struct BenchReport {
  BenchMode mode = BenchMode::Cold;
  PathTiming value;
  PathTiming gradient;
};

/// Times value-only and value+gradient queries over `points` (n * dim).
/// Cold clears the coefficient cache before each path; warm pre-touches
/// every element the points fall in. Out-of-domain points are skipped.
BenchReport run_bench(const Interpolator& interp, std::span<const double> points, BenchMode mode);

/// `n` seeded points uniform over the queryable domain, or over the first
/// valid element when `one_element` is set.
std::vector<double> bench_points(const Interpolator& interp, std::size_t n, std::uint64_t seed, bool one_element);

}  // namespace hyperspline::cli
