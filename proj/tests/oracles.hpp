// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations. Nothing here calls into the library's
// operator or interpolator code.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace oracle {

// Inverse of the 1D cubic Hermite system. Rows are monomial powers, columns
// are (v0,f), (v0,f'), (v1,f), (v1,f').
inline constexpr std::array<std::array<std::int64_t, 4>, 4> kHermiteInverse1D = {{
    {1, 0, 0, 0},
    {0, 1, 0, 0},
    {-3, -2, 3, -1},
    {2, 1, -2, 1},
}};

// B^-1 as the Kronecker product of the 1D inverse, in the row/column
// convention r = vertex * 2^dim + quantity, e = sum e_d 4^d.
inline std::vector<std::int64_t> kronecker_b_inverse(int dim) {
  const std::size_t s = std::size_t{1} << (2 * dim);
  const unsigned corners = 1U << dim;
  std::vector<std::int64_t> out(s * s, 0);
  for (std::size_t e = 0; e < s; ++e) {
    for (unsigned v = 0; v < corners; ++v) {
      for (unsigned q = 0; q < corners; ++q) {
        std::int64_t prod = 1;
        for (int d = 0; d < dim; ++d) {
          const auto power = (e >> (2 * d)) & 3U;
          const auto col = 2 * ((v >> d) & 1U) + ((q >> d) & 1U);
          prod *= kHermiteInverse1D[power][col];
        }
        out[e * s + v * corners + q] = prod;
      }
    }
  }
  return out;
}

// Cubic through four equally spaced samples at -1, 0, 1, 2 with central
// difference slopes at 0 and 1, evaluated at u in [0, 1].
inline double catmull_rom(double fm1, double f0, double f1, double f2, double u) {
  return 0.5 * (2.0 * f0 + (-fm1 + f1) * u + (2.0 * fm1 - 5.0 * f0 + 4.0 * f1 - f2) * u * u +
                (-fm1 + 3.0 * f0 - 3.0 * f1 + f2) * u * u * u);
}

// Term-by-term sum of alpha_e * prod_d d^{k_d}/du^{k_d} u_d^{e_d}.
inline double monomial_sum(std::span<const double> alpha, int dim, std::span<const double> u,
                           std::array<int, 4> orders = {0, 0, 0, 0}) {
  double total = 0.0;
  for (std::size_t e = 0; e < alpha.size(); ++e) {
    double term = alpha[e];
    for (int d = 0; d < dim; ++d) {
      const int n = static_cast<int>((e >> (2 * d)) & 3U);
      const int k = orders[static_cast<std::size_t>(d)];
      if (k > n) {
        term = 0.0;
        break;
      }
      double falling = 1.0;
      for (int j = 0; j < k; ++j) falling *= n - j;
      term *= falling * std::pow(u[static_cast<std::size_t>(d)], n - k);
    }
    total += term;
  }
  return total;
}

}  // namespace oracle
