// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include "bench.hpp"

#include <algorithm>
#include <chrono>

#include "hyperspline/random.hpp"

namespace hyperspline::cli {

namespace {

using Clock = std::chrono::steady_clock;

double percentile(std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1) + 0.5);
  return sorted[std::min(idx, sorted.size() - 1)];
}

template <typename Query>
PathTiming time_path(std::span<const double> points, std::size_t dim, Query query) {
  PathTiming t;
  const std::size_t n = dim ? points.size() / dim : 0;
  std::vector<double> latencies;
  latencies.reserve(n);
  const auto start = Clock::now();
  for (std::size_t i = 0; i < n; ++i) {
    const auto q0 = Clock::now();
    const double sum = query(points.subspan(i * dim, dim));
    const auto q1 = Clock::now();
    t.checksum += sum;
    latencies.push_back(std::chrono::duration<double, std::nano>(q1 - q0).count());
  }
  t.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  t.points = n;
  t.points_per_second = t.seconds > 0.0 ? static_cast<double>(n) / t.seconds : 0.0;
  std::sort(latencies.begin(), latencies.end());
  t.p50_ns = percentile(latencies, 0.50);
  t.p90_ns = percentile(latencies, 0.90);
  t.p99_ns = percentile(latencies, 0.99);
  return t;
}

void prepare(const Interpolator& interp, std::span<const double> points, BenchMode mode) {
  interp.clear_cache();
  if (mode == BenchMode::Cold) return;
  const auto dim = static_cast<std::size_t>(interp.dim());
  for (std::size_t i = 0; i * dim < points.size(); ++i) {
    try {
      const auto [elem, u] = locate(interp.grid(), points.subspan(i * dim, dim), interp.policy());
      interp.coefficients(elem);
    } catch (const Error&) {
    }
  }
}

}  // namespace

BenchReport run_bench(const Interpolator& interp, std::span<const double> points, BenchMode mode) {
  const auto dim = static_cast<std::size_t>(interp.dim());
  BenchReport report;
  report.mode = mode;

  prepare(interp, points, mode);
  report.value = time_path(points, dim, [&](std::span<const double> p) {
    try {
      double s = 0.0;
      for (double v : interp.eval(p)) s += v;
      return s;
    } catch (const Error&) {
      return 0.0;
    }
  });

  prepare(interp, points, mode);
  report.gradient = time_path(points, dim, [&](std::span<const double> p) {
    try {
      const auto r = interp.eval_with_gradient(p);
      double s = 0.0;
      for (double v : r.values) s += v;
      for (double g : r.gradient) s += g;
      return s;
    } catch (const Error&) {
      return 0.0;
    }
  });
  return report;
}

std::vector<double> bench_points(const Interpolator& interp, std::size_t n, std::uint64_t seed, bool one_element) {
  const auto& grid = interp.grid();
  const int dim = grid.dim();
  Rng rng(seed);
  std::vector<double> pts(n * static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) {
      auto [lo, hi] = grid.domain(d, interp.policy());
      if (one_element) {
        const auto first = grid.base_range(d, interp.policy()).first;
        lo = grid.axis(d).coordinate(first);
        hi = grid.axis(d).coordinate(first + 1);
      }
      pts[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] = rng.uniform(lo, hi);
    }
  }
  return pts;
}

}  // namespace hyperspline::cli
