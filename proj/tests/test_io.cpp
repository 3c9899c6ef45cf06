// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "hyperspline/error.hpp"
#include "hyperspline/fields.hpp"
#include "hyperspline/io.hpp"
#include "hyperspline/random.hpp"
#include "support.hpp"

using namespace hyperspline;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

std::string grid_text(const RegularGrid& grid) {
  std::ostringstream out;
  write_grid_csv(out, grid, default_component_names(grid.components()));
  return out.str();
}

std::vector<unsigned char> cache_bytes(const Interpolator& interp) {
  std::ostringstream out(std::ios::binary);
  save_cache(out, interp);
  const auto s = out.str();
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("load a 4D scalar grid") {
  const auto grid = testing::grid_from(testing::unit_axes(4, 4), 1, [](const auto& p, int) { return p[0] - p[3]; });
  std::istringstream in(grid_text(grid));
  const auto file = read_field_csv(in);
  CHECK(file.header.dim == 4);
  CHECK(file.header.row_count == 256);
  CHECK(file.header.component_names == std::vector<std::string>{"f"});
  CHECK(file.grid.components() == 1);
  for (int d = 0; d < 4; ++d) CHECK(file.grid.axis(d).count == 4);
  CHECK(std::ranges::equal(file.grid.values(), grid.values()));
}

TEST_CASE("load a 3D vector grid") {
  const auto grid = testing::grid_from(testing::unit_axes(3, 5), 3, [](const auto& p, int c) { return p[c]; });
  const auto text = grid_text(grid);
  CHECK(text.rfind("x,y,z,fx,fy,fz\n", 0) == 0);
  std::istringstream in(text);
  const auto file = read_field_csv(in);
  CHECK(file.header.dim == 3);
  CHECK(file.grid.components() == 3);
  CHECK(std::ranges::equal(file.grid.values(), grid.values()));
}

TEST_CASE("grid CSV round trip is exact") {
  const auto grid = sample(random_smooth_field(4, 3, 3), uniform_axes(4, -0.3, 0.1, 5));
  std::istringstream in(grid_text(grid));
  const auto loaded = read_field_csv(in).grid;
  CHECK(loaded.axes() == grid.axes());
  CHECK(std::ranges::equal(loaded.values(), grid.values()));
}

TEST_CASE("shuffled rows load identically") {
  const auto grid = sample(random_smooth_field(3, 4), uniform_axes(3, 0.0, 0.25, 5));
  std::istringstream text(grid_text(grid));
  std::string header;
  std::getline(text, header);
  std::vector<std::string> rows;
  for (std::string line; std::getline(text, line);) rows.push_back(line);
  Rng rng(1);
  for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);
  std::string shuffled = header + "\n";
  for (const auto& r : rows) shuffled += r + "\n";
  std::istringstream in(shuffled);
  CHECK(std::ranges::equal(read_field_csv(in).grid.values(), grid.values()));
}

TEST_CASE("missing rows and duplicates") {
  const auto grid = testing::grid_from(testing::unit_axes(4, 4), 1, [](const auto& p, int) { return p[1]; });
  auto text = grid_text(grid);
  text.erase(text.rfind('\n', text.size() - 2) + 1);  // drop the last row
  std::istringstream missing(text);
  CHECK(code_of([&] { read_field_csv(missing); }) == ErrorCode::IncompleteGrid);

  std::istringstream dup("x,y,z,f\n" + [] {
    std::string s;
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) s += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ",1\n";
    return s + "0,0,0,2\n";
  }());
  CHECK(code_of([&] { read_field_csv(dup); }) == ErrorCode::IncompleteGrid);
}

TEST_CASE("malformed CSV input") {
  std::istringstream no_header("0,0,0,1\n");
  CHECK(code_of([&] { read_field_csv(no_header); }) == ErrorCode::MissingHeader);
  std::istringstream no_fields("x,y,z\n0,0,0\n");
  CHECK(code_of([&] { read_field_csv(no_fields); }) == ErrorCode::MissingHeader);
  std::istringstream short_row("x,y,z,f\n0,0,0\n");
  CHECK(code_of([&] { read_field_csv(short_row); }) == ErrorCode::MalformedInput);
  std::istringstream junk("x,y,z,f\n0,0,zero,1\n");
  CHECK(code_of([&] { read_field_csv(junk); }) == ErrorCode::MalformedInput);
  std::istringstream nan_value("x,y,z,f\n0,0,0,nan\n");
  CHECK(code_of([&] { read_field_csv(nan_value); }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([] { load_grid_csv("/nonexistent/grid.csv"); }) == ErrorCode::Io);
}

TEST_CASE("results CSV columns") {
  const Interpolator interp(testing::grid_from(testing::unit_axes(4, 5), 1,
                                               [](const auto& p, int) { return p[0] + 2 * p[1] + 3 * p[2] + 4 * p[3]; }));
  const std::vector<double> pts = {1.25, 2.5, 2.0, 1.75, 9.0, 9.0, 9.0, 9.0};
  const auto results = interp.eval_batch(pts);
  std::ostringstream out;
  write_results_csv(out, 4, {"f"}, pts, results);
  std::istringstream lines(out.str());
  std::string header;
  std::string ok;
  std::string bad;
  std::getline(lines, header);
  std::getline(lines, ok);
  std::getline(lines, bad);
  CHECK(header == "x,y,z,t,f,df_dx,df_dy,df_dz,df_dt,error");
  CHECK(ok == "1.25,2.5,2,1.75,19.25,1,2,3,4,");
  CHECK(bad == "9,9,9,9,NaN,NaN,NaN,NaN,NaN,out_of_domain");
}

TEST_CASE("results CSV for three components") {
  std::ostringstream out;
  const std::vector<double> pts = {0, 0, 0, 0};
  const std::vector<std::optional<QueryResult>> results = {std::nullopt};
  write_results_csv(out, 4, default_component_names(3), pts, results);
  std::string header = out.str().substr(0, out.str().find('\n'));
  CHECK(std::count(header.begin(), header.end(), ',') == 4 + 3 + 12);
  CHECK(header.find("dfz_dt") != std::string::npos);
}

TEST_CASE("points CSV") {
  std::istringstream with_header("x,y,z\n1,2,3\n4,5,6\n");
  CHECK(read_points_csv(with_header, 3) == std::vector<double>{1, 2, 3, 4, 5, 6});
  std::istringstream bad("1,2\n");
  CHECK(code_of([&] { read_points_csv(bad, 3); }) == ErrorCode::MalformedInput);
}

TEST_CASE("cache round trip is bit identical") {
  const auto grid = std::make_shared<const RegularGrid>(sample(random_smooth_field(4, 12, 3), uniform_axes(4, 0, 0.5, 7)));
  const Interpolator first(grid);
  Rng rng(6);
  std::vector<double> pts(400);
  for (auto& v : pts) v = rng.uniform(0.5, 2.5);
  const auto expected = first.eval_batch(pts);
  const auto bytes = cache_bytes(first);

  const Interpolator second(grid);
  load_cache(bytes, second);
  CHECK(second.cache_size() == first.cache_size());
  const auto snap1 = first.cache_snapshot();
  const auto snap2 = second.cache_snapshot();
  for (std::size_t i = 0; i < snap1.size(); ++i) CHECK(snap1[i].second->coeffs == snap2[i].second->coeffs);
  const auto got = second.eval_batch(pts);
  for (std::size_t i = 0; i < got.size(); ++i) {
    REQUIRE(got[i].has_value() == expected[i].has_value());
    if (got[i]) {
      CHECK(got[i]->values == expected[i]->values);
      CHECK(got[i]->gradient == expected[i]->gradient);
    }
  }

  testing::TempDir dir("cache");
  save_cache(dir / "c.qcub", first);
  const Interpolator third(grid);
  load_cache(dir / "c.qcub", third);
  CHECK(third.cache_size() == first.cache_size());
}

TEST_CASE("cache rejects other grids and damaged files") {
  const auto grid = sample(random_smooth_field(3, 1), uniform_axes(3, 0, 0.5, 6));
  const Interpolator interp(grid);
  for (double x : {0.7, 1.2, 1.7}) {
    const std::vector<double> p = {x, 1.2, 1.3};
    interp.eval(p);
  }
  const auto bytes = cache_bytes(interp);

  const Interpolator other(sample(random_smooth_field(3, 2), uniform_axes(3, 0, 0.5, 6)));
  CHECK(code_of([&] { load_cache(bytes, other); }) == ErrorCode::FingerprintMismatch);
  const Interpolator shifted(sample(random_smooth_field(3, 1), uniform_axes(3, 0.1, 0.5, 6)));
  CHECK(code_of([&] { load_cache(bytes, shifted); }) == ErrorCode::FingerprintMismatch);

  const Interpolator fresh(grid);
  const std::vector<unsigned char> truncated(bytes.begin(), bytes.end() - 9);
  CHECK(code_of([&] { load_cache(truncated, fresh); }) == ErrorCode::TruncatedFile);
  CHECK(fresh.cache_size() == 0);

  auto wrong_magic = bytes;
  wrong_magic[0] = 'X';
  CHECK(code_of([&] { load_cache(wrong_magic, fresh); }) == ErrorCode::BadMagic);
  auto wrong_version = bytes;
  wrong_version[4] = 9;
  CHECK(code_of([&] { load_cache(wrong_version, fresh); }) == ErrorCode::VersionMismatch);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK(code_of([&] { load_cache(trailing, fresh); }) == ErrorCode::MalformedInput);
  CHECK(fresh.cache_size() == 0);
}

TEST_CASE("sample checksum depends on every sample") {
  const auto a = sample(random_smooth_field(3, 1), uniform_axes(3, 0, 0.5, 5));
  std::vector<double> values(a.values().begin(), a.values().end());
  values[17] = std::nextafter(values[17], 10.0);
  const RegularGrid b(a.axes(), 1, values);
  CHECK(sample_checksum(a) != sample_checksum(b));
  CHECK(sample_checksum(a) == sample_checksum(a));
}

TEST_CASE("loaded values follow the flat index layout") {
  // A field equal to its own flat storage index loads back in place.
  std::string text = "x,y,z,t,f\n";
  std::size_t flat = 0;
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 4; ++i, ++flat)
          text += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "," + std::to_string(l) +
                  "," + std::to_string(flat) + "\n";
  std::istringstream in(text);
  const auto grid = read_field_csv(in).grid;
  CHECK(grid.axis(1).count == 5);
  for (std::size_t i = 0; i < grid.values().size(); ++i) CHECK(grid.values()[i] == static_cast<double>(i));
}
