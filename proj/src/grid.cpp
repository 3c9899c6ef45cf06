// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperspline/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hyperspline {

namespace {

std::string axis_name(int d) {
  static constexpr const char* kNames[] = {"x", "y", "z", "t"};
  return d >= 0 && d < kMaxDim ? kNames[d] : std::to_string(d);
}

// One term of a ghost-aware sample: weight * f(index).
struct Tap {
  std::int64_t index;
  double weight;
};

struct AxisTaps {
  std::array<Tap, 2> taps;
  int size;
};

AxisTaps taps_for(std::int64_t i, std::int64_t count) {
  if (i < 0) return {{Tap{0, 2.0}, Tap{1, -1.0}}, 2};
  if (i >= count) return {{Tap{count - 1, 2.0}, Tap{count - 2, -1.0}}, 2};
  return {{Tap{i, 1.0}, Tap{0, 0.0}}, 1};
}

}  // namespace

void Axis::validate() const {
  if (!std::isfinite(origin) || !std::isfinite(spacing) || !(spacing > 0.0)) {
    throw Error(ErrorCode::InvalidGrid, "axis spacing must be finite and positive");
  }
  if (count < static_cast<std::size_t>(kStencilWidth)) {
    throw Error(ErrorCode::InvalidGrid,
                "axis needs at least 4 points, got " + std::to_string(count));
  }
}

RegularGrid::RegularGrid(std::vector<Axis> axes, int components, std::vector<double> values)
    : axes_(std::move(axes)), components_(components), values_(std::move(values)) {
  if (axes_.size() != 3 && axes_.size() != 4) {
    throw Error(ErrorCode::UnsupportedDimension,
                "grid dimension must be 3 or 4, got " + std::to_string(axes_.size()));
  }
  if (components_ < 1) {
    throw Error(ErrorCode::InvalidGrid, "grid needs at least one component");
  }
  std::size_t expected = static_cast<std::size_t>(components_);
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    try {
      axes_[d].validate();
    } catch (const Error& e) {
      throw Error(e.code(), "axis " + axis_name(static_cast<int>(d)) + ": " + e.what());
    }
    expected *= axes_[d].count;
  }
  if (values_.size() != expected) {
    throw Error(ErrorCode::InvalidGrid, "grid expects " + std::to_string(expected) +
                                            " values, got " + std::to_string(values_.size()));
  }
  auto bad = std::find_if(values_.begin(), values_.end(), [](double v) { return !std::isfinite(v); });
  if (bad != values_.end()) {
    throw Error(ErrorCode::NonFiniteValue,
                "non-finite sample at flat position " + std::to_string(bad - values_.begin()));
  }
}

std::size_t RegularGrid::vertex_index(const Index& idx) const noexcept {
  std::size_t flat = 0;
  for (int d = dim() - 1; d >= 0; --d) {
    flat = flat * axes_[d].count + static_cast<std::size_t>(idx[d]);
  }
  return flat;
}

std::size_t RegularGrid::element_count() const noexcept {
  std::size_t n = 1;
  for (const auto& a : axes_) n *= a.count - 1;
  return n;
}

std::size_t RegularGrid::valid_element_count(BoundaryPolicy policy) const noexcept {
  std::size_t n = 1;
  for (int d = 0; d < dim(); ++d) {
    auto [lo, hi] = base_range(d, policy);
    n *= static_cast<std::size_t>(hi - lo + 1);
  }
  return n;
}

std::pair<std::int64_t, std::int64_t> RegularGrid::base_range(int d, BoundaryPolicy policy) const {
  const auto count = static_cast<std::int64_t>(axis(d).count);
  if (policy == BoundaryPolicy::Strict) return {1, count - 3};
  return {0, count - 2};
}

std::pair<double, double> RegularGrid::domain(int d, BoundaryPolicy policy) const {
  auto [lo, hi] = base_range(d, policy);
  return {axis(d).coordinate(lo), axis(d).coordinate(hi + 1)};
}

bool RegularGrid::element_valid(const ElementRef& elem, BoundaryPolicy policy) const noexcept {
  for (int d = 0; d < dim(); ++d) {
    auto [lo, hi] = base_range(d, policy);
    const auto b = elem.base[d];
    if (b < lo || b > hi) return false;
  }
  return true;
}

std::uint64_t RegularGrid::element_key(const ElementRef& elem) const noexcept {
  std::uint64_t key = 0;
  for (int d = dim() - 1; d >= 0; --d) {
    key = key * (axes_[d].count - 1) +
          static_cast<std::uint64_t>(elem.base[d]);
  }
  return key;
}

std::pair<ElementRef, LocalCoord> locate(const RegularGrid& grid, std::span<const double> point,
                                         BoundaryPolicy policy) {
  if (static_cast<int>(point.size()) != grid.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query point has " + std::to_string(point.size()) +
                                                  " coordinates, grid has " +
                                                  std::to_string(grid.dim()));
  }
  ElementRef elem;
  LocalCoord local;
  for (int d = 0; d < grid.dim(); ++d) {
    const Axis& ax = grid.axis(d);
    const double s = (point[d] - ax.origin) / ax.spacing;
    auto [lo, hi] = grid.base_range(d, policy);
    // Absorbs rounding in coordinates computed as origin + i * spacing.
    const double tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s));
    if (!(s >= static_cast<double>(lo) - tol && s <= static_cast<double>(hi + 1) + tol)) {
      auto [a, b] = grid.domain(d, policy);
      throw Error(ErrorCode::OutOfDomain, "coordinate " + axis_name(d) + "=" +
                                              std::to_string(point[d]) +
                                              " outside [" + std::to_string(a) + ", " +
                                              std::to_string(b) + "]");
    }
    const auto base = std::clamp(static_cast<std::int64_t>(std::floor(s)), lo, hi);
    elem.base[d] = base;
    local.u[d] = std::clamp(s - static_cast<double>(base), 0.0, 1.0);
  }
  return {elem, local};
}

void neighborhood(const RegularGrid& grid, const ElementRef& elem, int component,
                  BoundaryPolicy policy, std::span<double> out) {
  const int dim = grid.dim();
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= kStencilWidth;
  if (out.size() != total) {
    throw Error(ErrorCode::DimensionMismatch, "neighborhood buffer must hold 4^dim values");
  }
  if (component < 0 || component >= grid.components()) {
    throw Error(ErrorCode::IndexOutOfRange, "component " + std::to_string(component) + " out of range");
  }
  if (!grid.element_valid(elem, policy)) {
    throw Error(ErrorCode::IndexOutOfRange, "element is not valid under the boundary policy");
  }

  std::array<std::array<AxisTaps, kStencilWidth>, kMaxDim> taps{};
  bool any_ghost = false;
  for (int d = 0; d < dim; ++d) {
    const auto count = static_cast<std::int64_t>(grid.axis(d).count);
    for (int o = 0; o < kStencilWidth; ++o) {
      const auto i = elem.base[d] + o - 1;
      taps[d][o] = taps_for(i, count);
      any_ghost = any_ghost || i < 0 || i >= count;
    }
  }

  Index idx{};
  std::array<int, kMaxDim> offset{};
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t rem = n;
    for (int d = 0; d < dim; ++d) {
      offset[d] = static_cast<int>(rem % kStencilWidth);
      rem /= kStencilWidth;
    }
    if (!any_ghost) {
      for (int d = 0; d < dim; ++d) {
        idx[d] =
            taps[d][offset[d]].taps[0].index;
      }
      out[n] = grid.value(idx, component);
      continue;
    }
    // Sum over the tensor product of per-axis taps (at most 2^dim terms).
    std::array<int, kMaxDim> pick{};
    double acc = 0.0;
    while (true) {
      double w = 1.0;
      for (int d = 0; d < dim; ++d) {
        const auto& t = taps[d][offset[d]];
        const auto& tap = t.taps[pick[d]];
        idx[d] = tap.index;
        w *= tap.weight;
      }
      acc += w * grid.value(idx, component);
      int d = 0;
      for (; d < dim; ++d) {
        const auto& t = taps[d][offset[d]];
        if (++pick[d] < t.size) break;
        pick[d] = 0;
      }
      if (d == dim) break;
    }
    out[n] = acc;
  }
}

std::vector<double> neighborhood(const RegularGrid& grid, const ElementRef& elem, int component,
                                 BoundaryPolicy policy) {
  std::size_t total = 1;
  for (int d = 0; d < grid.dim(); ++d) total *= kStencilWidth;
  std::vector<double> out(total);
  neighborhood(grid, elem, component, policy, out);
  return out;
}

Axis infer_axis(std::span<const double> coords) {
  if (coords.size() < static_cast<std::size_t>(kStencilWidth)) {
    throw Error(ErrorCode::TooFewPoints, "axis needs at least 4 distinct coordinates, got " +
                                             std::to_string(coords.size()));
  }
  const double first = coords.front();
  const double last = coords.back();
  const double spacing = (last - first) / static_cast<double>(coords.size() - 1);
  if (!std::isfinite(spacing) || !(spacing > 0.0)) {
    throw Error(ErrorCode::IrregularSpacing, "coordinates are not strictly increasing");
  }
  for (std::size_t i = 1; i < coords.size(); ++i) {
    const double gap = coords[i] - coords[i - 1];
    if (!(std::abs(gap - spacing) <= 1e-9 * spacing)) {
      throw Error(ErrorCode::IrregularSpacing,
                  "gap " + std::to_string(gap) + " at position " + std::to_string(i) +
                      " differs from spacing " + std::to_string(spacing));
    }
  }
  return Axis{first, spacing, coords.size()};
}

}  // namespace hyperspline
