// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hyperspline/grid.hpp"
#include "hyperspline/operators.hpp"

namespace hyperspline {

/// Per-element monomial coefficients in unit-cell coordinates, one block of
/// 4^dim values per component: coeffs[c * 4^dim + i + 4j + 16k + 64l].
struct CoefficientTensor {
  int dim = 0;
  int components = 0;
  std::vector<double> coeffs;

  std::span<const double> component(int c) const {
    const auto size = stencil_size(dim);
    return {coeffs.data() + static_cast<std::size_t>(c) * size, size};
  }
};

/// Field values and first partials in physical units.
struct QueryResult {
  std::vector<double> values;    // [m]
  std::vector<double> gradient;  // [m * dim], gradient[c * dim + d]

  double partial(int component, int axis, int dim) const {
    return gradient[static_cast<std::size_t>(component * dim + axis)];
  }
};

/// Per-axis derivative orders for raw derivative evaluation (0..3 each).
using DerivativeOrders = std::array<int, kMaxDim>;

/// Local cubic spline interpolant over a RegularGrid.
///
/// Coefficients are computed on first touch of an element and cached. Queries
/// may run concurrently; a cache entry is published only once complete.
class Interpolator {
 public:
  Interpolator(std::shared_ptr<const RegularGrid> grid, BoundaryPolicy policy = BoundaryPolicy::Strict);
  Interpolator(RegularGrid grid, BoundaryPolicy policy = BoundaryPolicy::Strict);

  const RegularGrid& grid() const noexcept { return *grid_; }
  std::shared_ptr<const RegularGrid> shared_grid() const noexcept { return grid_; }
  BoundaryPolicy policy() const noexcept { return policy_; }
  int dim() const noexcept { return grid_->dim(); }
  int components() const noexcept { return grid_->components(); }
  const AMatrix& fused_operator() const noexcept { return *a_; }

  /// Coefficients of a valid element, from the cache or freshly computed.
  std::shared_ptr<const CoefficientTensor> coefficients(const ElementRef& elem) const;

  /// Field value at a physical point. Throws OutOfDomain.
  std::vector<double> eval(std::span<const double> point) const;

  /// Value and physical-unit gradient at a point. Throws OutOfDomain.
  QueryResult eval_with_gradient(std::span<const double> point) const;

  /// Evaluates `points` (n * dim flattened coordinates). Out-of-domain points
  /// yield nullopt. `threads` = 0 picks the hardware concurrency; results are
  /// independent of the thread count.
  std::vector<std::optional<QueryResult>> eval_batch(std::span<const double> points,
                                                     unsigned threads = 1) const;

  /// Value-only evaluation in element `elem` at local coordinate `u`.
  std::vector<double> eval_in_element(const ElementRef& elem, const LocalCoord& u) const;

  /// Value and gradient evaluated through a chosen element. Lets callers
  /// compare both sides of a shared face.
  QueryResult eval_with_gradient_in_element(const ElementRef& elem, const LocalCoord& u) const;

  /// Arbitrary partial d^(o0+o1+..) f / dx^o0 dy^o1 .. in physical units, via
  /// differentiated power vectors. Only orders <= 1 per axis are continuous
  /// across element faces.
  std::vector<double> eval_derivative_in_element(const ElementRef& elem, const LocalCoord& u,
                                                 const DerivativeOrders& orders) const;
  std::vector<double> eval_derivative(std::span<const double> point, const DerivativeOrders& orders) const;

  /// Fills the cache for every valid element.
  void precompute_all(unsigned threads = 1) const;

  void clear_cache() const;
  std::size_t cache_size() const;

  /// Cache contents ordered by element key.
  std::vector<std::pair<ElementRef, std::shared_ptr<const CoefficientTensor>>> cache_snapshot() const;

  /// Inserts externally restored tensors. Existing entries are kept.
  void insert_cached(std::span<const std::pair<ElementRef, CoefficientTensor>> entries) const;

 private:
  std::shared_ptr<const CoefficientTensor> compute(const ElementRef& elem) const;

  std::shared_ptr<const RegularGrid> grid_;
  BoundaryPolicy policy_;
  const AMatrix* a_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, std::pair<ElementRef, std::shared_ptr<const CoefficientTensor>>> cache_;
};

/// Contracts one component's coefficient block with per-axis power vectors.
/// powers[d] holds the (possibly differentiated) vector for axis d, x innermost.
double contract(std::span<const double> coeffs, int dim, const std::array<std::array<double, 4>, kMaxDim>& powers);

/// d^order/du^order of (1, u, u^2, u^3).
std::array<double, 4> power_vector(double u, int order);

/// Resolves a thread count: nonzero values pass through, 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

}  // namespace hyperspline
