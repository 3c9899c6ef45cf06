// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperspline/operators.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>

namespace hyperspline {

namespace {

int exponent(std::size_t e, int d) { return static_cast<int>((e >> (2 * d)) & 3U); }

// One axis factor of a B entry: the (optionally differentiated) monomial p^n at p in {0, 1}.
std::int64_t monomial_factor(int n, int p, bool differentiated) {
  if (differentiated) {
    if (n == 0) return 0;
    return p == 1 ? n : (n == 1 ? 1 : 0);
  }
  return p == 1 ? 1 : (n == 0 ? 1 : 0);
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  return out;
}

template <typename T, typename Fmt>
void write_matrix(const std::filesystem::path& path, const DenseMatrix<T>& m, Fmt fmt) {
  auto out = open_for_write(path);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << fmt(m(r, c));
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace

void require_supported_dim(int dim) {
  if (dim != 3 && dim != 4) {
    throw Error(ErrorCode::UnsupportedDimension,
                "only dimensions 3 and 4 are supported, got " + std::to_string(dim));
  }
}

std::vector<QuantityId> quantity_list(int dim) {
  require_supported_dim(dim);
  std::vector<QuantityId> out;
  out.reserve(corner_count(dim));
  for (unsigned mask = 0; mask < corner_count(dim); ++mask) out.push_back(QuantityId{mask});
  return out;
}

DenseMatrix<double> DMatrix::to_dense() const {
  DenseMatrix<double> m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& e : rows[r]) m(r, e.column) = e.weight.get_d();
  }
  return m;
}

AMatrix::AMatrix(int dim, DenseMatrix<double> entries) : dim_(dim), entries_(std::move(entries)) {
  row_start_.reserve(entries_.rows() + 1);
  row_start_.push_back(0);
  for (std::size_t r = 0; r < entries_.rows(); ++r) {
    for (std::size_t c = 0; c < entries_.cols(); ++c) {
      if (entries_(r, c) != 0.0) {
        columns_.push_back(static_cast<std::uint32_t>(c));
        values_.push_back(entries_(r, c));
      }
    }
    row_start_.push_back(static_cast<std::uint32_t>(values_.size()));
  }
}

void AMatrix::apply(std::span<const double> x, std::span<double> alpha) const {
  if (x.size() != entries_.cols() || alpha.size() != entries_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "operand size does not match A");
  }
  for (std::size_t r = 0; r < entries_.rows(); ++r) {
    double acc = 0.0;
    for (auto k = row_start_[r]; k < row_start_[r + 1]; ++k) acc += values_[k] * x[columns_[k]];
    alpha[r] = acc;
  }
}

BMatrix build_b(int dim) {
  require_supported_dim(dim);
  const std::size_t size = stencil_size(dim);
  const std::size_t corners = corner_count(dim);
  BMatrix b{dim, DenseMatrix<std::int64_t>(size, size)};
  for (std::size_t v = 0; v < corners; ++v) {
    for (std::size_t q = 0; q < corners; ++q) {
      const std::size_t row = v * corners + q;
      for (std::size_t e = 0; e < size; ++e) {
        std::int64_t entry = 1;
        for (int d = 0; d < dim && entry != 0; ++d) {
          entry *= monomial_factor(exponent(e, d), static_cast<int>((v >> d) & 1U), ((q >> d) & 1U) != 0);
        }
        b.entries(row, e) = entry;
      }
    }
  }
  return b;
}

bool is_exact_inverse(const BMatrix& b, const DenseMatrix<Rational>& inverse) {
  const std::size_t n = b.entries.rows();
  if (inverse.rows() != n || inverse.cols() != n) return false;
  std::vector<Rational> acc(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (auto& a : acc) a = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto bk = b.entries(r, k);
      if (bk == 0) continue;
      const Rational scale(static_cast<long>(bk));
      for (std::size_t c = 0; c < n; ++c) {
        if (sgn(inverse(k, c)) != 0) acc[c] += scale * inverse(k, c);
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (acc[c] != (r == c ? 1 : 0)) return false;
    }
  }
  return true;
}

BInverse invert_exact(const BMatrix& b) {
  const std::size_t n = b.entries.rows();
  if (b.entries.cols() != n) throw Error(ErrorCode::DimensionMismatch, "B must be square");

  // Augmented [B | I], one row vector each.
  std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(2 * n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) rows[r][c] = static_cast<long>(b.entries(r, c));
    rows[r][n + r] = 1;
  }

  std::vector<std::size_t> support;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(rows[pivot][col]) == 0) ++pivot;
    if (pivot == n) throw Error(ErrorCode::Singular, "B is singular at column " + std::to_string(col));
    std::swap(rows[col], rows[pivot]);

    auto& prow = rows[col];
    support.clear();
    for (std::size_t c = col; c < 2 * n; ++c) {
      if (sgn(prow[c]) != 0) support.push_back(c);
    }
    if (prow[col] != 1) {
      const Rational inv = 1 / Rational(prow[col]);
      for (auto c : support) prow[c] *= inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(rows[r][col]) == 0) continue;
      const Rational factor = rows[r][col];
      auto& target = rows[r];
      for (auto c : support) target[c] -= factor * prow[c];
    }
  }

  BInverse out{b.dim, DenseMatrix<Rational>(n, n), true, {}};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out.exact(r, c) = rows[r][n + c];
      if (out.exact(r, c).get_den() != 1) out.integral = false;
    }
  }
  if (!is_exact_inverse(b, out.exact)) {
    throw Error(ErrorCode::Singular, "exact inverse failed verification");
  }
  if (out.integral) {
    out.integer = DenseMatrix<std::int64_t>(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) out.integer(r, c) = out.exact(r, c).get_num().get_si();
    }
  } else {
    std::cerr << "hyperspline: warning: inverse of B (dim " << b.dim
              << ") has non-integer entries; keeping exact rationals\n";
  }
  return out;
}

DMatrix build_d(int dim) {
  require_supported_dim(dim);
  const std::size_t corners = corner_count(dim);
  DMatrix d{dim, stencil_size(dim), std::vector<std::vector<DEntry>>(corners * corners)};
  for (std::size_t v = 0; v < corners; ++v) {
    for (const auto q : quantity_list(dim)) {
      auto& row = d.rows[v * corners + q.mask];
      const Rational magnitude(1, 1UL << q.order());
      // Each subset of the differentiated axes takes the -1 side there.
      unsigned minus = 0;
      while (true) {
        std::uint32_t column = 0;
        for (int a = dim - 1; a >= 0; --a) {
          int offset = static_cast<int>((v >> a) & 1U);
          if (q.differentiates(a)) offset += ((minus >> a) & 1U) ? -1 : 1;
          column = column * 4 + static_cast<std::uint32_t>(offset + 1);
        }
        row.push_back(DEntry{column, (std::popcount(minus) % 2) ? Rational(-magnitude) : magnitude});
        if (minus == q.mask) break;
        minus = (minus - q.mask) & q.mask;
      }
    }
  }
  return d;
}

AMatrix compose_a(const BInverse& b_inv, const DMatrix& d) {
  if (b_inv.dim != d.dim || b_inv.exact.cols() != d.rows.size()) {
    throw Error(ErrorCode::DimensionMismatch, "B^-1 and D have different dimensions");
  }
  const std::size_t n = b_inv.exact.rows();
  DenseMatrix<double> a(n, d.cols);
  std::vector<Rational> acc(d.cols);
  for (std::size_t r = 0; r < n; ++r) {
    for (auto& v : acc) v = 0;
    for (std::size_t k = 0; k < d.rows.size(); ++k) {
      const auto& coef = b_inv.exact(r, k);
      if (sgn(coef) == 0) continue;
      for (const auto& e : d.rows[k]) acc[e.column] += coef * e.weight;
    }
    for (std::size_t c = 0; c < d.cols; ++c) a(r, c) = acc[c].get_d();
  }
  return AMatrix(d.dim, std::move(a));
}

OperatorSet build_operator_set(int dim) {
  OperatorSet ops;
  ops.b = build_b(dim);
  ops.b_inv = invert_exact(ops.b);
  ops.d = build_d(dim);
  ops.a = compose_a(ops.b_inv, ops.d);
  return ops;
}

const OperatorSet& operator_set(int dim) {
  require_supported_dim(dim);
  if (dim == 3) {
    static const OperatorSet ops3 = build_operator_set(3);
    return ops3;
  }
  static const OperatorSet ops4 = build_operator_set(4);
  return ops4;
}

void export_operators_csv(const OperatorSet& ops, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_matrix(dir / "b.csv", ops.b.entries, [](std::int64_t v) { return std::to_string(v); });
  write_matrix(dir / "b_inverse.csv", ops.b_inv.exact, [](const Rational& v) { return v.get_str(); });

  DenseMatrix<Rational> d(ops.d.rows.size(), ops.d.cols);
  for (std::size_t r = 0; r < ops.d.rows.size(); ++r) {
    for (const auto& e : ops.d.rows[r]) d(r, e.column) = e.weight;
  }
  write_matrix(dir / "d.csv", d, [](const Rational& v) { return v.get_str(); });
  write_matrix(dir / "a.csv", ops.a.entries(), format_double);
}

}  // namespace hyperspline
