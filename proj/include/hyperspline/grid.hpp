// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hyperspline/error.hpp"

namespace hyperspline {

/// Largest supported grid dimension. Fixed-size index arrays are sized by it.
inline constexpr int kMaxDim = 4;

/// Points per axis in an element's sample neighborhood (offsets -1, 0, 1, 2).
inline constexpr int kStencilWidth = 4;

using Index = std::array<std::int64_t, kMaxDim>;

/// One regularly spaced axis: coordinate(i) = origin + i * spacing.
struct Axis {
  double origin = 0.0;
  double spacing = 1.0;
  std::size_t count = 0;

  double coordinate(std::int64_t i) const noexcept {
    return origin + static_cast<double>(i) * spacing;
  }

  /// Throws InvalidGrid unless spacing > 0 (and finite) and count >= 4.
  void validate() const;

  friend bool operator==(const Axis&, const Axis&) = default;
};

enum class BoundaryPolicy {
  /// Only elements with a full sample neighborhood are queryable.
  Strict,
  /// Edge elements become queryable through linearly extrapolated ghost layers.
  LinearGhost,
};

/// The grid element whose lowest-corner vertex sits at `base`.
struct ElementRef {
  Index base{};

  friend bool operator==(const ElementRef&, const ElementRef&) = default;
};

/// Position inside an element, each entry in [0, 1].
struct LocalCoord {
  std::array<double, kMaxDim> u{};
};

/// Samples of an m-component field on a regular 3D or 4D lattice.
///
/// Values are stored vertex-major with the component index fastest:
/// values[(((i3 * n2 + i2) * n1 + i1) * n0 + i0) * m + c].
/// Immutable after construction.
class RegularGrid {
 public:
  RegularGrid(std::vector<Axis> axes, int components, std::vector<double> values);

  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  int components() const noexcept { return components_; }
  const std::vector<Axis>& axes() const noexcept { return axes_; }
  const Axis& axis(int d) const { return axes_.at(static_cast<std::size_t>(d)); }
  std::span<const double> values() const noexcept { return values_; }

  std::size_t vertex_count() const noexcept { return values_.size() / static_cast<std::size_t>(components_); }

  /// Flat vertex index of an in-range multi-index.
  std::size_t vertex_index(const Index& idx) const noexcept;

  double value(const Index& idx, int component) const noexcept {
    return values_[vertex_index(idx) * static_cast<std::size_t>(components_) +
                   static_cast<std::size_t>(component)];
  }

  /// Total number of elements, prod(count - 1).
  std::size_t element_count() const noexcept;

  /// Number of elements queryable under `policy`.
  std::size_t valid_element_count(BoundaryPolicy policy) const noexcept;

  /// Inclusive range of valid element base indices along axis d.
  std::pair<std::int64_t, std::int64_t> base_range(int d, BoundaryPolicy policy) const;

  /// Closed physical interval queryable along axis d.
  std::pair<double, double> domain(int d, BoundaryPolicy policy) const;

  bool element_valid(const ElementRef& elem, BoundaryPolicy policy) const noexcept;

  /// Flat index of an element over the (count - 1)-per-axis element lattice.
  std::uint64_t element_key(const ElementRef& elem) const noexcept;

 private:
  std::vector<Axis> axes_;
  int components_;
  std::vector<double> values_;
};

/// Finds the element containing `point` and the point's local coordinates.
/// Points on the upper domain boundary map to the last valid element, u = 1.
/// Throws OutOfDomain if the point is outside the policy's queryable domain.
std::pair<ElementRef, LocalCoord> locate(const RegularGrid& grid, std::span<const double> point,
                                         BoundaryPolicy policy);

/// Samples of one component at offsets {-1,0,1,2}^dim around elem.base,
/// flattened as n = sum_d (o[d] + 1) * 4^d. Writes 4^dim values into `out`.
///
/// Under LinearGhost, indices -1 and count are filled with 2 f(edge) - f(edge -/+ 1),
/// applied per axis, so corner ghosts are tensor-product extrapolations.
void neighborhood(const RegularGrid& grid, const ElementRef& elem, int component,
                  BoundaryPolicy policy, std::span<double> out);

std::vector<double> neighborhood(const RegularGrid& grid, const ElementRef& elem, int component,
                                 BoundaryPolicy policy);

/// Builds an axis from strictly increasing, evenly spaced coordinates.
/// Gaps must match the mean spacing to 1e-9 relative.
Axis infer_axis(std::span<const double> sorted_unique_coords);

}  // namespace hyperspline
