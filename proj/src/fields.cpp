// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperspline/fields.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyperspline/random.hpp"

namespace hyperspline {

AnalyticField::AnalyticField(int dim, int components, ValueFn value, GradientFn gradient,
                             std::string descriptor)
    : dim_(dim),
      components_(components),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      descriptor_(std::move(descriptor)) {
  require_supported_dim(dim_);
  if (components_ < 1) throw Error(ErrorCode::InvalidGrid, "field needs at least one component");

  Rng rng(0x5eedf1e1dULL + static_cast<std::uint64_t>(dim_));
  std::vector<double> point(static_cast<std::size_t>(dim_));
  for (int trial = 0; trial < 3; ++trial) {
    for (auto& x : point) x = 0.25 + 2.5 * rng.unit();
    const auto grad = this->gradient(point);
    for (int d = 0; d < dim_; ++d) {
      const double h = 1e-5 * std::max(1.0, std::abs(point[d]));
      auto hi = point;
      auto lo = point;
      hi[d] += h;
      lo[d] -= h;
      const auto fh = this->value(hi);
      const auto fl = this->value(lo);
      for (int c = 0; c < components_; ++c) {
        const double fd = (fh[c] - fl[c]) / (2.0 * h);
        const double g = grad[c * dim_ + d];
        const double scale = std::max({1.0, std::abs(g), std::abs(fh[c])});
        if (!(std::abs(fd - g) <= 1e-6 * scale)) {
          throw Error(ErrorCode::InvalidGrid, "gradient of field '" + descriptor_ +
                                                  "' disagrees with finite differences");
        }
      }
    }
  }
}

std::vector<double> AnalyticField::value(std::span<const double> point) const {
  std::vector<double> out(static_cast<std::size_t>(components_));
  value_(point, out);
  return out;
}

std::vector<double> AnalyticField::gradient(std::span<const double> point) const {
  std::vector<double> out(static_cast<std::size_t>(components_ * dim_));
  gradient_(point, out);
  return out;
}

AnalyticField constant_field(int dim, double c) {
  return AnalyticField(
      dim, 1, [c](std::span<const double>, std::span<double> v) { v[0] = c; },
      [](std::span<const double>, std::span<double> g) { std::fill(g.begin(), g.end(), 0.0); },
      "constant");
}

AnalyticField linear_field(std::vector<double> slopes, double offset) {
  const int dim = static_cast<int>(slopes.size());
  auto value = [slopes, offset](std::span<const double> p, std::span<double> v) {
    double acc = offset;
    for (std::size_t d = 0; d < slopes.size(); ++d) acc += slopes[d] * p[d];
    v[0] = acc;
  };
  auto gradient = [slopes](std::span<const double>, std::span<double> g) {
    std::copy(slopes.begin(), slopes.end(), g.begin());
  };
  return AnalyticField(dim, 1, value, gradient, "linear");
}

AnalyticField multilinear_field(int dim) {
  auto value = [dim](std::span<const double> p, std::span<double> v) {
    double acc = 1.0;
    for (int d = 0; d < dim; ++d) acc *= p[d];
    v[0] = acc;
  };
  auto gradient = [dim](std::span<const double> p, std::span<double> g) {
    for (int d = 0; d < dim; ++d) {
      double acc = 1.0;
      for (int e = 0; e < dim; ++e) {
        if (e != d) acc *= p[e];
      }
      g[d] = acc;
    }
  };
  return AnalyticField(dim, 1, value, gradient, "multilinear");
}

AnalyticField tensor_polynomial_field(int dim, int degree, std::uint64_t seed) {
  const int width = degree + 1;
  std::size_t terms = 1;
  for (int d = 0; d < dim; ++d) terms *= static_cast<std::size_t>(width);
  Rng rng(seed);
  std::vector<double> coeffs(terms);
  for (auto& c : coeffs) c = rng.uniform(-1.0, 1.0);

  auto exponents = [dim, width](std::size_t term) {
    std::array<int, kMaxDim> e{};
    for (int d = 0; d < dim; ++d) {
      e[d] = static_cast<int>(term % static_cast<std::size_t>(width));
      term /= static_cast<std::size_t>(width);
    }
    return e;
  };
  auto value = [=](std::span<const double> p, std::span<double> v) {
    double acc = 0.0;
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      const auto e = exponents(t);
      double term = coeffs[t];
      for (int d = 0; d < dim; ++d) term *= std::pow(p[d], e[d]);
      acc += term;
    }
    v[0] = acc;
  };
  auto gradient = [=](std::span<const double> p, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      const auto e = exponents(t);
      for (int d = 0; d < dim; ++d) {
        if (e[d] == 0) continue;
        double term = coeffs[t] * e[d] * std::pow(p[d], e[d] - 1);
        for (int k = 0; k < dim; ++k) {
          if (k != d) term *= std::pow(p[k], e[k]);
        }
        g[d] += term;
      }
    }
  };
  return AnalyticField(dim, 1, value, gradient, "tensor-degree-" + std::to_string(degree));
}

AnalyticField trig_field(int dim) {
  // sin on x, cos on every other axis.
  auto factor = [](int d, double x) { return d == 0 ? std::sin(x) : std::cos(x); };
  auto slope = [](int d, double x) { return d == 0 ? std::cos(x) : -std::sin(x); };
  auto value = [=](std::span<const double> p, std::span<double> v) {
    double acc = 1.0;
    for (int d = 0; d < dim; ++d) acc *= factor(d, p[d]);
    v[0] = acc;
  };
  auto gradient = [=](std::span<const double> p, std::span<double> g) {
    for (int d = 0; d < dim; ++d) {
      double acc = slope(d, p[d]);
      for (int e = 0; e < dim; ++e) {
        if (e != d) acc *= factor(e, p[e]);
      }
      g[d] = acc;
    }
  };
  return AnalyticField(dim, 1, value, gradient, "trig-product");
}

AnalyticField random_smooth_field(int dim, std::uint64_t seed, int components) {
  constexpr int kTerms = 3;
  struct Term {
    double amplitude;
    std::array<double, kMaxDim> freq;
    std::array<double, kMaxDim> phase;
  };
  Rng rng(seed);
  std::vector<Term> terms(static_cast<std::size_t>(kTerms * components));
  for (auto& t : terms) {
    t.amplitude = rng.uniform(-1.0, 1.0);
    for (int d = 0; d < kMaxDim; ++d) {
      t.freq[d] = rng.uniform(0.5, 1.5);
      t.phase[d] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
  }
  auto value = [=](std::span<const double> p, std::span<double> v) {
    for (int c = 0; c < components; ++c) {
      double acc = 0.0;
      for (int k = 0; k < kTerms; ++k) {
        const auto& t = terms[static_cast<std::size_t>(c * kTerms + k)];
        double prod = t.amplitude;
        for (int d = 0; d < dim; ++d) prod *= std::sin(t.freq[d] * p[d] + t.phase[d]);
        acc += prod;
      }
      v[c] = acc;
    }
  };
  auto gradient = [=](std::span<const double> p, std::span<double> g) {
    for (int c = 0; c < components; ++c) {
      for (int d = 0; d < dim; ++d) {
        double acc = 0.0;
        for (int k = 0; k < kTerms; ++k) {
          const auto& t = terms[static_cast<std::size_t>(c * kTerms + k)];
          double prod = t.amplitude * t.freq[d] * std::cos(t.freq[d] * p[d] + t.phase[d]);
          for (int e = 0; e < dim; ++e) {
            if (e != d) prod *= std::sin(t.freq[e] * p[e] + t.phase[e]);
          }
          acc += prod;
        }
        g[c * dim + d] = acc;
      }
    }
  };
  return AnalyticField(dim, components, value, gradient, "random-smooth");
}

AnalyticField quadrupole_field() {
  // B = g(t) grad(phi), phi = xy + 0.05 (x^3 y - x y^3) + 0.1 z (x^2 - y^2), g = 1 + sin(t) / 2.
  auto value = [](std::span<const double> p, std::span<double> v) {
    const double x = p[0], y = p[1], z = p[2];
    const double g = 1.0 + 0.5 * std::sin(p[3]);
    v[0] = g * (y + 0.05 * (3 * x * x * y - y * y * y) + 0.2 * x * z);
    v[1] = g * (x + 0.05 * (x * x * x - 3 * x * y * y) - 0.2 * y * z);
    v[2] = g * (0.1 * (x * x - y * y));
  };
  auto gradient = [](std::span<const double> p, std::span<double> out) {
    const double x = p[0], y = p[1], z = p[2];
    const double g = 1.0 + 0.5 * std::sin(p[3]);
    const double dg = 0.5 * std::cos(p[3]);
    const double bx = y + 0.05 * (3 * x * x * y - y * y * y) + 0.2 * x * z;
    const double by = x + 0.05 * (x * x * x - 3 * x * y * y) - 0.2 * y * z;
    const double bz = 0.1 * (x * x - y * y);
    const double cross = 1.0 + 0.15 * (x * x - y * y);
    const double rows[3][4] = {
        {g * (0.3 * x * y + 0.2 * z), g * cross, g * 0.2 * x, dg * bx},
        {g * cross, g * (-0.3 * x * y - 0.2 * z), g * -0.2 * y, dg * by},
        {g * 0.2 * x, g * -0.2 * y, 0.0, dg * bz},
    };
    for (int c = 0; c < 3; ++c) {
      for (int d = 0; d < 4; ++d) out[c * 4 + d] = rows[c][d];
    }
  };
  return AnalyticField(4, 3, value, gradient, "quadrupole");
}

std::vector<Axis> uniform_axes(int dim, double origin, double spacing, std::size_t count) {
  return std::vector<Axis>(static_cast<std::size_t>(dim), Axis{origin, spacing, count});
}

RegularGrid sample(const AnalyticField& field, const std::vector<Axis>& axes) {
  if (static_cast<int>(axes.size()) != field.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "axis count does not match field dimension");
  }
  const int dim = field.dim();
  const auto m = static_cast<std::size_t>(field.components());
  std::size_t vertices = 1;
  for (const auto& a : axes) {
    a.validate();
    vertices *= a.count;
  }
  std::vector<double> values(vertices * m);
  std::vector<double> point(static_cast<std::size_t>(dim));
  std::vector<double> v(m);
  for (std::size_t flat = 0; flat < vertices; ++flat) {
    std::size_t rem = flat;
    for (int d = 0; d < dim; ++d) {
      point[d] = axes[d].coordinate(static_cast<std::int64_t>(rem % axes[d].count));
      rem /= axes[d].count;
    }
    const auto f = field.value(point);
    std::copy(f.begin(), f.end(), values.begin() + static_cast<std::ptrdiff_t>(flat * m));
  }
  return RegularGrid(axes, field.components(), std::move(values));
}

CoefficientTensor oracle_coefficients(const RegularGrid& grid, const ElementRef& elem, BoundaryPolicy policy) {
  const int dim = grid.dim();
  const auto& ops = operator_set(dim);
  const auto size = static_cast<Eigen::Index>(stencil_size(dim));

  Eigen::MatrixXd b(size, size);
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = 0; c < size; ++c) {
      b(r, c) = static_cast<double>(ops.b.entries(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);

  CoefficientTensor out{dim, grid.components(), std::vector<double>(stencil_size(dim) * static_cast<std::size_t>(grid.components()))};
  for (int c = 0; c < grid.components(); ++c) {
    const auto x = neighborhood(grid, elem, c, policy);
    Eigen::VectorXd rhs(size);
    for (std::size_t r = 0; r < ops.d.rows.size(); ++r) {
      double acc = 0.0;
      for (const auto& e : ops.d.rows[r]) acc += e.weight.get_d() * x[e.column];
      rhs(static_cast<Eigen::Index>(r)) = acc;
    }
    const Eigen::VectorXd alpha = lu.solve(rhs);
    for (Eigen::Index k = 0; k < size; ++k) {
      out.coeffs[static_cast<std::size_t>(c) * stencil_size(dim) + static_cast<std::size_t>(k)] = alpha(k);
    }
  }
  return out;
}

ContinuityReport continuity_scan(const Interpolator& interp, std::size_t n_samples, std::uint64_t seed) {
  const RegularGrid& grid = interp.grid();
  const int dim = grid.dim();
  std::vector<int> face_axes;
  for (int d = 0; d < dim; ++d) {
    auto [lo, hi] = grid.base_range(d, interp.policy());
    if (hi > lo) face_axes.push_back(d);
  }
  if (face_axes.empty()) {
    throw Error(ErrorCode::InvalidGrid, "continuity scan needs two valid elements along some axis");
  }

  Rng rng(seed);
  ContinuityReport report;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const int axis = face_axes[rng.below(face_axes.size())];
    ElementRef left;
    LocalCoord u;
    for (int d = 0; d < dim; ++d) {
      auto [lo, hi] = grid.base_range(d, interp.policy());
      if (d == axis) --hi;
      left.base[d] = lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
      u.u[d] = rng.unit();
    }
    ElementRef right = left;
    ++right.base[axis];
    LocalCoord ul = u;
    LocalCoord ur = u;
    ul.u[axis] = 1.0;
    ur.u[axis] = 0.0;

    const auto a = interp.eval_with_gradient_in_element(left, ul);
    const auto b = interp.eval_with_gradient_in_element(right, ur);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      report.max_value_jump = std::max(report.max_value_jump, std::abs(a.values[i] - b.values[i]));
    }
    for (std::size_t i = 0; i < a.gradient.size(); ++i) {
      report.max_gradient_jump = std::max(report.max_gradient_jump, std::abs(a.gradient[i] - b.gradient[i]));
    }
    DerivativeOrders second{};
    second[axis] = 2;
    const auto sa = interp.eval_derivative_in_element(left, ul, second);
    const auto sb = interp.eval_derivative_in_element(right, ur, second);
    for (std::size_t i = 0; i < sa.size(); ++i) {
      report.max_second_derivative_jump = std::max(report.max_second_derivative_jump, std::abs(sa[i] - sb[i]));
    }
    ++report.samples;
  }
  return report;
}

ConvergenceReport convergence_study(const AnalyticField& field, const std::vector<Axis>& base_axes,
                                    int n_levels, std::size_t n_probes, std::uint64_t seed) {
  const int dim = field.dim();
  if (static_cast<int>(base_axes.size()) != dim) {
    throw Error(ErrorCode::DimensionMismatch, "axis count does not match field dimension");
  }
  for (const auto& a : base_axes) a.validate();

  // Probes live in the coarsest Strict domain, which every finer level contains.
  Rng rng(seed);
  std::vector<double> probes(n_probes * static_cast<std::size_t>(dim));
  for (std::size_t p = 0; p < n_probes; ++p) {
    for (int d = 0; d < dim; ++d) {
      const auto& a = base_axes[d];
      const double lo = a.coordinate(1);
      const double hi = a.coordinate(static_cast<std::int64_t>(a.count) - 2);
      probes[p * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] = rng.uniform(lo, hi);
    }
  }

  ConvergenceReport report;
  for (int level = 0; level < n_levels; ++level) {
    std::vector<Axis> axes = base_axes;
    const double factor = std::ldexp(1.0, level);
    for (auto& a : axes) {
      a.spacing /= factor;
      a.count = (a.count - 1) * static_cast<std::size_t>(factor) + 1;
    }
    const Interpolator interp(sample(field, axes), BoundaryPolicy::Strict);
    double max_error = 0.0;
    for (std::size_t p = 0; p < n_probes; ++p) {
      const std::span<const double> point(probes.data() + p * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
      const auto got = interp.eval(point);
      const auto want = field.value(point);
      for (std::size_t c = 0; c < got.size(); ++c) max_error = std::max(max_error, std::abs(got[c] - want[c]));
    }
    report.levels.push_back({axes[0].spacing, max_error});
  }

  if (report.levels.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(report.levels.size());
    for (const auto& l : report.levels) {
      const double x = std::log2(l.spacing);
      const double y = std::log2(std::max(l.max_error, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    report.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return report;
}

bool within_rel(double a, double b, double rel, double floor) {
  return std::abs(a - b) <= rel * std::max(std::abs(b), floor);
}

}  // namespace hyperspline
