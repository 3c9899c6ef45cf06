// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperspline/grid.hpp"
#include "hyperspline/interpolator.hpp"

namespace hyperspline {

struct FieldFileHeader {
  int dim = 0;
  std::vector<std::string> component_names;
  std::size_t row_count = 0;
};

struct FieldFile {
  FieldFileHeader header;
  RegularGrid grid;
};

/// Field map CSV: header "x,y,z[,t],<field>..." followed by one row per
/// vertex, in any order. Axes are inferred from the unique coordinates.
FieldFile read_field_csv(std::istream& in, const std::string& source = "<stream>");
FieldFile load_field_csv(const std::filesystem::path& path);
RegularGrid load_grid_csv(const std::filesystem::path& path);

/// "f" for scalars, "fx,fy,fz" for three components, "f0,f1,..." otherwise.
std::vector<std::string> default_component_names(int components);

/// Dumps every vertex in storage order with shortest round-trip decimals.
void write_grid_csv(std::ostream& out, const RegularGrid& grid, const std::vector<std::string>& names);
void write_grid_csv(const std::filesystem::path& path, const RegularGrid& grid,
                    const std::vector<std::string>& names);

/// Result CSV columns: coordinates, values, d<comp>_d<axis> gradients, error.
/// Out-of-domain rows carry NaN in every result column and error=out_of_domain.
void write_results_csv(std::ostream& out, int dim, const std::vector<std::string>& names,
                       std::span<const double> points, std::span<const std::optional<QueryResult>> results);
void write_results_csv(const std::filesystem::path& path, int dim, const std::vector<std::string>& names,
                       std::span<const double> points, std::span<const std::optional<QueryResult>> results);

/// Query points, one per line with `dim` comma-separated coordinates. An
/// optional header line naming the axes is skipped. Throws MalformedInput.
std::vector<double> read_points_csv(std::istream& in, int dim);
std::vector<double> load_points_csv(const std::filesystem::path& path, int dim);

/// FNV-1a over the little-endian bytes of every sample.
std::uint64_t sample_checksum(const RegularGrid& grid);

inline constexpr std::uint16_t kCacheFormatVersion = 1;

/// Binary coefficient cache ("QCUB"): magic, u16 version, fingerprint
/// (u32 dim, u32 counts[dim], f64 origins[dim], f64 spacings[dim], u32 m,
/// u64 sample checksum), u64 entry count, then per entry u32 base[dim] and
/// 4^dim * m f64 coefficients. All little-endian.
void save_cache(const std::filesystem::path& path, const Interpolator& interp);
void save_cache(std::ostream& out, const Interpolator& interp);

/// Restores a cache written by save_cache. The interpolator is untouched
/// unless the whole file validates.
void load_cache(const std::filesystem::path& path, const Interpolator& interp);
void load_cache(std::span<const unsigned char> bytes, const Interpolator& interp);

}  // namespace hyperspline
