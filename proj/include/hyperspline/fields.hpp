// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hyperspline/grid.hpp"
#include "hyperspline/interpolator.hpp"

namespace hyperspline {

/// A closed-form field with its exact gradient, used as ground truth.
class AnalyticField {
 public:
  using ValueFn = std::function<void(std::span<const double> point, std::span<double> value)>;
  /// Writes gradient[c * dim + d].
  using GradientFn = std::function<void(std::span<const double> point, std::span<double> gradient)>;

  /// Spot-checks `gradient` against central differences of `value` at a few
  /// seeded points and throws InvalidGrid if they disagree.
  AnalyticField(int dim, int components, ValueFn value, GradientFn gradient, std::string descriptor);

  int dim() const noexcept { return dim_; }
  int components() const noexcept { return components_; }
  const std::string& descriptor() const noexcept { return descriptor_; }

  std::vector<double> value(std::span<const double> point) const;
  std::vector<double> gradient(std::span<const double> point) const;

 private:
  int dim_;
  int components_;
  ValueFn value_;
  GradientFn gradient_;
  std::string descriptor_;
};

// Field roster.
AnalyticField constant_field(int dim, double c);
/// offset + sum_d slopes[d] * x_d; dim = slopes.size().
AnalyticField linear_field(std::vector<double> slopes, double offset = 0.0);
/// prod_d x_d.
AnalyticField multilinear_field(int dim);
/// sum over exponents e (each 0..degree) of c_e prod_d x_d^e_d, with c_e uniform in [-1, 1].
AnalyticField tensor_polynomial_field(int dim, int degree, std::uint64_t seed);
/// sin(x) cos(y) cos(z) [cos(t)].
AnalyticField trig_field(int dim);
/// Sum of three products of sinusoids with seeded amplitudes, frequencies and phases.
AnalyticField random_smooth_field(int dim, std::uint64_t seed, int components = 1);
/// Three-component, time-modulated quadrupole-like vector field in (x, y, z, t).
AnalyticField quadrupole_field();

RegularGrid sample(const AnalyticField& field, const std::vector<Axis>& axes);

/// Uniform axes: `count` points starting at `origin` with `spacing`, repeated dim times.
std::vector<Axis> uniform_axes(int dim, double origin, double spacing, std::size_t count);

/// Coefficients from b = D x and a dense LU solve of B alpha = b. Shares no
/// code path with the fused operator.
CoefficientTensor oracle_coefficients(const RegularGrid& grid, const ElementRef& elem,
                                      BoundaryPolicy policy = BoundaryPolicy::Strict);

struct ContinuityReport {
  std::size_t samples = 0;
  double max_value_jump = 0.0;
  double max_gradient_jump = 0.0;
  /// Jump of the second derivative normal to the face; not expected to vanish.
  double max_second_derivative_jump = 0.0;
};

/// Evaluates random points on shared faces of adjacent valid elements from
/// both sides and reports the largest discrepancies.
ContinuityReport continuity_scan(const Interpolator& interp, std::size_t n_samples, std::uint64_t seed);

struct ConvergenceLevel {
  double spacing = 0.0;
  double max_error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  /// Least-squares slope of log2(error) against log2(spacing).
  double fitted_order = 0.0;
};

/// Halves every spacing per level over the same physical box and measures the
/// max value error at seeded probes inside the coarsest queryable domain.
ConvergenceReport convergence_study(const AnalyticField& field, const std::vector<Axis>& base_axes,
                                    int n_levels, std::size_t n_probes = 200, std::uint64_t seed = 7);

/// |a - b| <= rel * max(|b|, floor).
bool within_rel(double a, double b, double rel, double floor = 1.0);

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 1;
  /// When set, analytic-truth checks are skipped and continuity runs on this grid.
  std::shared_ptr<const RegularGrid> grid;
  BoundaryPolicy policy = BoundaryPolicy::Strict;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options);

}  // namespace hyperspline
