// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperspline/interpolator.hpp"

#include <algorithm>
#include <mutex>
#include <string>
#include <thread>

namespace hyperspline {

namespace {

using PowerSet = std::array<std::array<double, 4>, kMaxDim>;

// Runs fn(begin, end) over [0, n) split into contiguous chunks.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    workers.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

std::array<double, 4> power_vector(double u, int order) {
  switch (order) {
    case 0: return {1.0, u, u * u, u * u * u};
    case 1: return {0.0, 1.0, 2.0 * u, 3.0 * u * u};
    case 2: return {0.0, 0.0, 2.0, 6.0 * u};
    case 3: return {0.0, 0.0, 0.0, 6.0};
    default: return {0.0, 0.0, 0.0, 0.0};
  }
}

double contract(std::span<const double> coeffs, int dim, const PowerSet& powers) {
  std::array<double, 64> buf{};
  std::size_t n = coeffs.size() / 4;
  const auto& px = powers[0];
  for (std::size_t k = 0; k < n; ++k) {
    const double* a = coeffs.data() + 4 * k;
    buf[k] = ((a[3] * px[3] + a[2] * px[2]) + a[1] * px[1]) + a[0] * px[0];
  }
  for (int d = 1; d < dim; ++d) {
    const auto& p = powers[d];
    n /= 4;
    for (std::size_t k = 0; k < n; ++k) {
      const double* a = buf.data() + 4 * k;
      buf[k] = ((a[3] * p[3] + a[2] * p[2]) + a[1] * p[1]) + a[0] * p[0];
    }
  }
  return buf[0];
}

Interpolator::Interpolator(std::shared_ptr<const RegularGrid> grid, BoundaryPolicy policy)
    : grid_(std::move(grid)), policy_(policy) {
  if (!grid_) throw Error(ErrorCode::InvalidGrid, "interpolator needs a grid");
  a_ = &operator_set(grid_->dim()).a;
}

Interpolator::Interpolator(RegularGrid grid, BoundaryPolicy policy)
    : Interpolator(std::make_shared<const RegularGrid>(std::move(grid)), policy) {}

std::shared_ptr<const CoefficientTensor> Interpolator::compute(const ElementRef& elem) const {
  const int dim = grid_->dim();
  const std::size_t size = stencil_size(dim);
  auto tensor = std::make_shared<CoefficientTensor>();
  tensor->dim = dim;
  tensor->components = grid_->components();
  tensor->coeffs.resize(size * static_cast<std::size_t>(tensor->components));
  std::vector<double> samples(size);
  for (int c = 0; c < tensor->components; ++c) {
    neighborhood(*grid_, elem, c, policy_, samples);
    a_->apply(samples, std::span<double>(tensor->coeffs).subspan(static_cast<std::size_t>(c) * size, size));
  }
  return tensor;
}

std::shared_ptr<const CoefficientTensor> Interpolator::coefficients(const ElementRef& elem) const {
  if (!grid_->element_valid(elem, policy_)) {
    throw Error(ErrorCode::OutOfDomain, "element is outside the queryable domain");
  }
  const auto key = grid_->element_key(elem);
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second.second;
  }
  auto fresh = compute(elem);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.try_emplace(key, elem, std::move(fresh));
  return it->second.second;
}

std::vector<double> Interpolator::eval_derivative_in_element(const ElementRef& elem, const LocalCoord& u,
                                                             const DerivativeOrders& orders) const {
  const auto tensor = coefficients(elem);
  const int dim = grid_->dim();
  PowerSet powers{};
  double scale = 1.0;
  for (int d = 0; d < dim; ++d) {
    powers[d] = power_vector(u.u[d], orders[d]);
    for (int k = 0; k < orders[d]; ++k) scale *= grid_->axis(d).spacing;
  }
  std::vector<double> out(static_cast<std::size_t>(tensor->components));
  for (int c = 0; c < tensor->components; ++c) out[c] = contract(tensor->component(c), dim, powers) / scale;
  return out;
}

std::vector<double> Interpolator::eval_in_element(const ElementRef& elem, const LocalCoord& u) const {
  return eval_derivative_in_element(elem, u, DerivativeOrders{});
}

QueryResult Interpolator::eval_with_gradient_in_element(const ElementRef& elem, const LocalCoord& u) const {
  const auto tensor = coefficients(elem);
  const int dim = grid_->dim();
  const int m = tensor->components;
  PowerSet values{};
  PowerSet slopes{};
  for (int d = 0; d < dim; ++d) {
    values[d] = power_vector(u.u[d], 0);
    slopes[d] = power_vector(u.u[d], 1);
  }
  QueryResult result;
  result.values.resize(static_cast<std::size_t>(m));
  result.gradient.resize(static_cast<std::size_t>(m * dim));
  for (int c = 0; c < m; ++c) {
    const auto block = tensor->component(c);
    result.values[c] = contract(block, dim, values);
    for (int d = 0; d < dim; ++d) {
      PowerSet powers = values;
      powers[d] = slopes[d];
      result.gradient[c * dim + d] = contract(block, dim, powers) / grid_->axis(d).spacing;
    }
  }
  return result;
}

std::vector<double> Interpolator::eval(std::span<const double> point) const {
  const auto [elem, u] = locate(*grid_, point, policy_);
  return eval_in_element(elem, u);
}

QueryResult Interpolator::eval_with_gradient(std::span<const double> point) const {
  const auto [elem, u] = locate(*grid_, point, policy_);
  return eval_with_gradient_in_element(elem, u);
}

std::vector<double> Interpolator::eval_derivative(std::span<const double> point,
                                                  const DerivativeOrders& orders) const {
  const auto [elem, u] = locate(*grid_, point, policy_);
  return eval_derivative_in_element(elem, u, orders);
}

std::vector<std::optional<QueryResult>> Interpolator::eval_batch(std::span<const double> points,
                                                                 unsigned threads) const {
  const auto dim = static_cast<std::size_t>(grid_->dim());
  if (points.size() % dim != 0) {
    throw Error(ErrorCode::DimensionMismatch, "batch size is not a multiple of the grid dimension");
  }
  const std::size_t n = points.size() / dim;
  std::vector<std::optional<QueryResult>> out(n);
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = eval_with_gradient(points.subspan(i * dim, dim));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::OutOfDomain) throw;
      }
    }
  });
  return out;
}

void Interpolator::precompute_all(unsigned threads) const {
  const int dim = grid_->dim();
  std::array<std::int64_t, kMaxDim> lo{};
  std::array<std::int64_t, kMaxDim> extent{};
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) {
    auto [a, b] = grid_->base_range(d, policy_);
    lo[d] = a;
    extent[d] = b - a + 1;
    total *= static_cast<std::size_t>(extent[d]);
  }
  parallel_chunks(total, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      ElementRef elem;
      auto rem = static_cast<std::int64_t>(i);
      for (int d = 0; d < dim; ++d) {
        elem.base[d] = lo[d] + rem % extent[d];
        rem /= extent[d];
      }
      coefficients(elem);
    }
  });
}

void Interpolator::clear_cache() const {
  std::unique_lock lock(mutex_);
  cache_.clear();
}

std::size_t Interpolator::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

std::vector<std::pair<ElementRef, std::shared_ptr<const CoefficientTensor>>> Interpolator::cache_snapshot() const {
  std::vector<std::pair<std::uint64_t, std::pair<ElementRef, std::shared_ptr<const CoefficientTensor>>>> keyed;
  {
    std::shared_lock lock(mutex_);
    keyed.assign(cache_.begin(), cache_.end());
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<ElementRef, std::shared_ptr<const CoefficientTensor>>> out;
  out.reserve(keyed.size());
  for (auto& [key, entry] : keyed) out.push_back(std::move(entry));
  return out;
}

void Interpolator::insert_cached(std::span<const std::pair<ElementRef, CoefficientTensor>> entries) const {
  const std::size_t expected = stencil_size(grid_->dim()) * static_cast<std::size_t>(grid_->components());
  for (const auto& [elem, tensor] : entries) {
    if (!grid_->element_valid(elem, policy_) || tensor.dim != grid_->dim() ||
        tensor.components != grid_->components() || tensor.coeffs.size() != expected) {
      throw Error(ErrorCode::FingerprintMismatch, "cached tensor does not fit this interpolator");
    }
  }
  std::unique_lock lock(mutex_);
  for (const auto& [elem, tensor] : entries) {
    cache_.try_emplace(grid_->element_key(elem), elem, std::make_shared<const CoefficientTensor>(tensor));
  }
}

}  // namespace hyperspline
