// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hyperspline/error.hpp"

namespace hyperspline {

using Rational = mpq_class;

/// Row-major dense matrix.
template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// 4^dim: the number of polynomial coefficients, constraints and neighborhood samples.
constexpr std::size_t stencil_size(int dim) noexcept { return std::size_t{1} << (2 * dim); }

/// 2^dim: element vertices, and also constraint quantities per vertex.
constexpr std::size_t corner_count(int dim) noexcept { return std::size_t{1} << dim; }

/// Throws UnsupportedDimension unless dim is 3 or 4.
void require_supported_dim(int dim);

/// A mixed partial derivative taking at most one derivative per axis.
/// Bit d of `mask` set means differentiate once along axis d; mask 0 is f.
struct QuantityId {
  unsigned mask = 0;

  int order() const noexcept { return std::popcount(mask); }
  bool differentiates(int axis) const noexcept { return ((mask >> axis) & 1U) != 0; }

  friend bool operator==(QuantityId, QuantityId) = default;
};

/// The 2^dim constraint quantities imposed at every vertex, in ascending mask order.
std::vector<QuantityId> quantity_list(int dim);

/// Constraint matrix mapping monomial coefficients to vertex constraint values.
/// Row r = vertex_mask * 2^dim + quantity_mask; column e = i + 4j + 16k + 64l.
struct BMatrix {
  int dim = 0;
  DenseMatrix<std::int64_t> entries;
};

/// Exact inverse of B. `integer` is filled only when every entry is integral.
struct BInverse {
  int dim = 0;
  DenseMatrix<Rational> exact;
  bool integral = false;
  DenseMatrix<std::int64_t> integer;
};

struct DEntry {
  std::uint32_t column;
  Rational weight;
};

/// Sparse finite-difference operator: neighborhood samples to constraint values.
/// Columns follow the neighborhood flattening n = sum_d (o[d] + 1) * 4^d.
struct DMatrix {
  int dim = 0;
  std::size_t cols = 0;
  std::vector<std::vector<DEntry>> rows;

  DenseMatrix<double> to_dense() const;
};

/// The fused operator A = B^-1 D in double precision, taking a sample
/// neighborhood straight to monomial coefficients.
class AMatrix {
 public:
  AMatrix() = default;
  AMatrix(int dim, DenseMatrix<double> entries);

  int dim() const noexcept { return dim_; }
  const DenseMatrix<double>& entries() const noexcept { return entries_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  /// alpha = A x. Sizes must be 4^dim.
  void apply(std::span<const double> x, std::span<double> alpha) const;

 private:
  int dim_ = 0;
  DenseMatrix<double> entries_;
  // CSR copy of the nonzero pattern used by apply().
  std::vector<std::uint32_t> row_start_;
  std::vector<std::uint32_t> columns_;
  std::vector<double> values_;
};

/// entry((v, q), e) = prod_d  q_d ? e_d * v_d^(e_d - 1) : v_d^e_d  with v_d in {0, 1}.
BMatrix build_b(int dim);

/// Gauss-Jordan elimination in exact rational arithmetic. Verifies B B^-1 = I
/// and throws Singular if elimination or verification fails. A non-integral
/// inverse is kept as rationals with a warning on stderr.
BInverse invert_exact(const BMatrix& b);

/// True iff B * inverse is exactly the identity.
bool is_exact_inverse(const BMatrix& b, const DenseMatrix<Rational>& inverse);

/// Tensor-product central differences: for quantity q at vertex v, apply
/// (f(+1) - f(-1)) / 2 along every differentiated axis and sample v elsewhere.
DMatrix build_d(int dim);

/// A = B^-1 D, accumulated exactly and rounded to double once.
AMatrix compose_a(const BInverse& b_inv, const DMatrix& d);

struct OperatorSet {
  BMatrix b;
  BInverse b_inv;
  DMatrix d;
  AMatrix a;
};

OperatorSet build_operator_set(int dim);

/// Process-wide, lazily built operators for dim 3 or 4. Safe to call concurrently.
const OperatorSet& operator_set(int dim);

/// Writes b.csv, b_inverse.csv, d.csv and a.csv into `dir`. Exact values are
/// written as integers or p/q strings; A as shortest round-trip decimals.
void export_operators_csv(const OperatorSet& ops, const std::filesystem::path& dir);

}  // namespace hyperspline
