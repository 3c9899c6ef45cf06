// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hyperspline/grid.hpp"

namespace testing {

using PointFn = std::function<double(const std::array<double, 4>&, int component)>;

// Samples fn at every vertex of the lattice described by axes.
inline hyperspline::RegularGrid grid_from(const std::vector<hyperspline::Axis>& axes, int components,
                                          const PointFn& fn) {
  std::size_t vertices = 1;
  for (const auto& a : axes) vertices *= a.count;
  std::vector<double> values;
  values.reserve(vertices * static_cast<std::size_t>(components));
  for (std::size_t flat = 0; flat < vertices; ++flat) {
    std::array<double, 4> p{};
    std::size_t rem = flat;
    for (std::size_t d = 0; d < axes.size(); ++d) {
      p[d] = axes[d].coordinate(static_cast<std::int64_t>(rem % axes[d].count));
      rem /= axes[d].count;
    }
    for (int c = 0; c < components; ++c) values.push_back(fn(p, c));
  }
  return hyperspline::RegularGrid(axes, components, std::move(values));
}

inline std::vector<hyperspline::Axis> unit_axes(int dim, std::size_t count) {
  return std::vector<hyperspline::Axis>(static_cast<std::size_t>(dim), hyperspline::Axis{0.0, 1.0, count});
}

// Fresh scratch directory under the build tree, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("hyperspline_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
