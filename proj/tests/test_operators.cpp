// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "hyperspline/error.hpp"
#include "hyperspline/operators.hpp"
#include "hyperspline/random.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hyperspline;

namespace {

std::size_t row_of(int dim, unsigned vertex, unsigned quantity) { return vertex * corner_count(dim) + quantity; }

// Neighborhood column for offsets o_d in {-1, 0, 1, 2}.
std::uint32_t column_of(std::initializer_list<int> offsets) {
  std::uint32_t col = 0;
  std::uint32_t scale = 1;
  for (int o : offsets) {
    col += static_cast<std::uint32_t>(o + 1) * scale;
    scale *= 4;
  }
  return col;
}

double weight_at(const DMatrix& d, std::size_t row, std::uint32_t col) {
  for (const auto& entry : d.rows[row]) {
    if (entry.column == col) return entry.weight.get_d();
  }
  return 0.0;
}

}  // namespace

TEST_CASE("quantity lists") {
  const auto q3 = quantity_list(3);
  REQUIRE(q3.size() == 8);
  CHECK(q3[7].mask == 7);
  CHECK(q3[7].order() == 3);
  const auto q4 = quantity_list(4);
  REQUIRE(q4.size() == 16);
  CHECK(q4[15].mask == 15);
  CHECK(q4[15].order() == 4);
  for (unsigned i = 0; i < 16; ++i) CHECK(q4[i].mask == i);
  CHECK(q4[5].differentiates(0));
  CHECK_FALSE(q4[5].differentiates(1));
  CHECK_THROWS_AS(quantity_list(2), Error);
}

TEST_CASE("B rows at the origin and the far corner") {
  for (int dim : {3, 4}) {
    const auto b = build_b(dim);
    const auto s = stencil_size(dim);
    REQUIRE(b.entries.rows() == s);
    const auto value_row = b.entries.row(row_of(dim, 0, 0));
    CHECK(value_row[0] == 1);
    CHECK(std::count(value_row.begin(), value_row.end(), 0) == static_cast<long>(s - 1));
    const auto dx_row = b.entries.row(row_of(dim, 0, 1));
    CHECK(dx_row[1] == 1);
    CHECK(std::count(dx_row.begin(), dx_row.end(), 0) == static_cast<long>(s - 1));
    const auto corner = b.entries.row(row_of(dim, static_cast<unsigned>(corner_count(dim) - 1), 0));
    CHECK(std::all_of(corner.begin(), corner.end(), [](std::int64_t v) { return v == 1; }));
  }
  CHECK_THROWS_AS(build_b(5), Error);
}

TEST_CASE("exact inverse matches the Kronecker Hermite oracle") {
  for (int dim : {3, 4}) {
    const auto& ops = operator_set(dim);
    REQUIRE(ops.b_inv.integral);
    CHECK(is_exact_inverse(ops.b, ops.b_inv.exact));
    const auto expected = oracle::kronecker_b_inverse(dim);
    const auto s = stencil_size(dim);
    std::size_t mismatches = 0;
    std::int64_t largest = 0;
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) {
        if (ops.b_inv.integer(r, c) != expected[r * s + c]) ++mismatches;
        if (ops.b_inv.exact(r, c) != Rational(expected[r * s + c])) ++mismatches;
        largest = std::max(largest, std::abs(ops.b_inv.integer(r, c)));
      }
    }
    CHECK(mismatches == 0);
    CHECK(largest <= 81);
  }
}

TEST_CASE("integer product B times B inverse is the identity") {
  for (int dim : {3, 4}) {
    const auto& ops = operator_set(dim);
    const auto s = stencil_size(dim);
    bool identity = true;
    for (std::size_t r = 0; r < s && identity; ++r) {
      for (std::size_t c = 0; c < s; ++c) {
        std::int64_t acc = 0;
        for (std::size_t k = 0; k < s; ++k) acc += ops.b.entries(r, k) * ops.b_inv.integer(k, c);
        if (acc != (r == c ? 1 : 0)) {
          identity = false;
          break;
        }
      }
    }
    CHECK(identity);
  }
}

TEST_CASE("inverse recovers the xyz monomial") {
  const auto& ops = operator_set(3);
  // b-vector of f = xyz: value = v0 v1 v2, each derivative replaces a factor with 1.
  std::vector<std::int64_t> b(64);
  for (unsigned v = 0; v < 8; ++v) {
    for (unsigned q = 0; q < 8; ++q) {
      std::int64_t prod = 1;
      for (int d = 0; d < 3; ++d) prod *= ((q >> d) & 1U) ? 1 : ((v >> d) & 1U);
      b[v * 8 + q] = prod;
    }
  }
  for (std::size_t e = 0; e < 64; ++e) {
    std::int64_t alpha = 0;
    for (std::size_t r = 0; r < 64; ++r) alpha += ops.b_inv.integer(e, r) * b[r];
    CHECK(alpha == (e == 1 + 4 + 16 ? 1 : 0));
  }
}

TEST_CASE("D central difference weights") {
  const auto d = build_d(4);
  const auto fx = row_of(4, 0, 1);
  CHECK(weight_at(d, fx, column_of({1, 0, 0, 0})) == 0.5);
  CHECK(weight_at(d, fx, column_of({-1, 0, 0, 0})) == -0.5);
  CHECK(d.rows[fx].size() == 2);

  const auto fxy = row_of(4, 0b0011, 0b0011);
  CHECK(weight_at(d, fxy, column_of({2, 2, 0, 0})) == 0.25);
  CHECK(weight_at(d, fxy, column_of({0, 0, 0, 0})) == 0.25);
  CHECK(weight_at(d, fxy, column_of({2, 0, 0, 0})) == -0.25);
  CHECK(weight_at(d, fxy, column_of({0, 2, 0, 0})) == -0.25);
}

TEST_CASE("D row structure") {
  for (int dim : {3, 4}) {
    const auto d = build_d(dim);
    const auto corners = corner_count(dim);
    for (unsigned v = 0; v < corners; ++v) {
      for (unsigned q = 0; q < corners; ++q) {
        const auto& row = d.rows[row_of(dim, v, q)];
        const auto order = std::popcount(q);
        CHECK(row.size() == (std::size_t{1} << order));
        Rational sum = 0;
        for (const auto& e : row) {
          CHECK(abs(e.weight) == Rational(1, 1U << order));
          sum += e.weight;
        }
        CHECK(sum == (q == 0 ? 1 : 0));
      }
    }
  }
}

TEST_CASE("D is exact for per-axis quadratics") {
  // f = (1 + x + x^2)(2 - y + 3y^2)(1 + z^2)(t - t^2), sampled on offsets -1..2.
  auto poly = [](double s, int d) {
    switch (d) {
      case 0: return 1 + s + s * s;
      case 1: return 2 - s + 3 * s * s;
      case 2: return 1 + s * s;
      default: return s - s * s;
    }
  };
  auto dpoly = [](double s, int d) {
    switch (d) {
      case 0: return 1 + 2 * s;
      case 1: return -1 + 6 * s;
      case 2: return 2 * s;
      default: return 1 - 2 * s;
    }
  };
  const auto d = build_d(4);
  std::vector<double> x(256);
  for (std::size_t n = 0; n < 256; ++n) {
    double v = 1;
    for (int k = 0; k < 4; ++k) v *= poly(static_cast<double>((n >> (2 * k)) & 3U) - 1.0, k);
    x[n] = v;
  }
  for (unsigned v = 0; v < 16; ++v) {
    for (unsigned q = 0; q < 16; ++q) {
      double expected = 1;
      for (int k = 0; k < 4; ++k) {
        const double s = (v >> k) & 1U;
        expected *= ((q >> k) & 1U) ? dpoly(s, k) : poly(s, k);
      }
      double got = 0;
      for (const auto& e : d.rows[row_of(4, v, q)]) got += e.weight.get_d() * x[e.column];
      CHECK(got == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("central difference of x squared") {
  const auto d = build_d(3);
  // Global x = 2 is the neighborhood column at offset 1 when the element base is 1,
  // so vertex v_x = 0 sits at x = 1 and v_x = 1 at x = 2.
  std::vector<double> x(64);
  for (std::size_t n = 0; n < 64; ++n) {
    const double gx = static_cast<double>(n & 3U);  // offsets -1..2 around base 1
    x[n] = gx * gx;
  }
  double fx = 0;
  for (const auto& e : d.rows[row_of(3, 1, 1)]) fx += e.weight.get_d() * x[e.column];
  CHECK(fx == 4.0);
}

TEST_CASE("A reproduces constants and linear fields") {
  for (int dim : {3, 4}) {
    const auto& a = operator_set(dim).a;
    const auto s = stencil_size(dim);
    std::vector<double> ones(s, 1.0);
    std::vector<double> alpha(s);
    a.apply(ones, alpha);
    CHECK(alpha[0] == 1.0);
    for (std::size_t e = 1; e < s; ++e) CHECK(alpha[e] == 0.0);

    // f = x with base value 7 at offset 0.
    std::vector<double> ramp(s);
    for (std::size_t n = 0; n < s; ++n) ramp[n] = 7.0 + static_cast<double>(n & 3U) - 1.0;
    a.apply(ramp, alpha);
    CHECK(alpha[0] == 7.0);
    CHECK(alpha[1] == 1.0);
    for (std::size_t e = 2; e < s; ++e) CHECK(alpha[e] == 0.0);
  }
}

TEST_CASE("A matches a dense solve of B alpha = D x") {
  Rng rng(2024);
  for (int dim : {3, 4}) {
    const auto& ops = operator_set(dim);
    const auto s = stencil_size(dim);
    Eigen::MatrixXd b(s, s);
    for (std::size_t r = 0; r < s; ++r)
      for (std::size_t c = 0; c < s; ++c) b(r, c) = static_cast<double>(ops.b.entries(r, c));
    const auto d_dense = ops.d.to_dense();
    Eigen::MatrixXd d(s, s);
    for (std::size_t r = 0; r < s; ++r)
      for (std::size_t c = 0; c < s; ++c) d(r, c) = d_dense(r, c);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    double worst = 0;
    std::vector<double> x(s);
    std::vector<double> alpha(s);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd xv(s);
      for (std::size_t i = 0; i < s; ++i) xv(i) = x[i] = rng.uniform(-1, 1);
      const Eigen::VectorXd expected = lu.solve(d * xv);
      ops.a.apply(x, alpha);
      for (std::size_t i = 0; i < s; ++i) worst = std::max(worst, std::abs(alpha[i] - expected(i)));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("A sparsity") {
  CHECK(operator_set(3).a.nonzeros() == 1331);
  CHECK(operator_set(4).a.nonzeros() == 14641);
}

TEST_CASE("compose_a rejects mismatched dimensions") {
  const auto& b3 = operator_set(3).b_inv;
  const auto d4 = build_d(4);
  try {
    compose_a(b3, d4);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("invert_exact reports a singular matrix") {
  auto b = build_b(3);
  for (std::size_t c = 0; c < 64; ++c) b.entries(5, c) = b.entries(4, c);
  try {
    invert_exact(b);
    FAIL("expected Singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Singular);
  }
}

TEST_CASE("operator CSV export") {
  testing::TempDir dir("ops");
  export_operators_csv(operator_set(3), dir.path());
  for (const char* name : {"b.csv", "b_inverse.csv", "d.csv", "a.csv"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  std::ifstream in(dir / "b_inverse.csv");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines >= 64);
}
