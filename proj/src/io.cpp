// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperspline/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace hyperspline {

namespace {

constexpr char kMagic[4] = {'Q', 'C', 'U', 'B'};
constexpr const char* kAxisNames[] = {"x", "y", "z", "t"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(bytes), std::end(bytes));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (bytes_.size() - pos_ < sizeof(T)) throw Error(ErrorCode::TruncatedFile, "cache file is truncated");
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(raw), std::end(raw));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }

  std::span<const unsigned char> take(std::size_t n) {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::TruncatedFile, "cache file is truncated");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<std::string> default_component_names(int components) {
  if (components == 1) return {"f"};
  if (components == 3) return {"fx", "fy", "fz"};
  std::vector<std::string> names;
  for (int c = 0; c < components; ++c) names.push_back("f" + std::to_string(c));
  return names;
}

FieldFile read_field_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header_line = line;
      header = split(header_line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorCode::MissingHeader, source + ": empty file");

  int dim = 0;
  while (dim < kMaxDim && static_cast<std::size_t>(dim) < header.size() && header[dim] == kAxisNames[dim]) ++dim;
  if (dim < 3) {
    throw Error(ErrorCode::MissingHeader, where(source, line_no) + "header must start with x,y,z");
  }
  const int m = static_cast<int>(header.size()) - dim;
  if (m < 1) throw Error(ErrorCode::MissingHeader, where(source, line_no) + "header names no field columns");
  FieldFileHeader meta{dim, {}, 0};
  for (std::size_t i = static_cast<std::size_t>(dim); i < header.size(); ++i) {
    if (header[i].empty()) throw Error(ErrorCode::MissingHeader, where(source, line_no) + "empty column name");
    meta.component_names.emplace_back(header[i]);
  }

  std::vector<double> coords;  // row-major, dim per row
  std::vector<double> samples;  // row-major, m per row
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::MalformedInput, where(source, line_no) + "expected " + std::to_string(header.size()) +
                                                 " columns, got " + std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto v = parse_double(fields[i]);
      if (!v) {
        throw Error(ErrorCode::MalformedInput,
                    where(source, line_no) + "cannot parse '" + std::string(fields[i]) + "' as a number");
      }
      if (!std::isfinite(*v)) {
        throw Error(ErrorCode::NonFiniteValue, where(source, line_no) + "non-finite value '" + std::string(fields[i]) + "'");
      }
      (i < static_cast<std::size_t>(dim) ? coords : samples).push_back(*v);
    }
    ++meta.row_count;
  }

  const std::size_t rows = meta.row_count;
  std::vector<std::vector<double>> unique(static_cast<std::size_t>(dim));
  std::vector<Axis> axes;
  std::size_t expected = 1;
  for (int d = 0; d < dim; ++d) {
    auto& u = unique[d];
    u.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) u.push_back(coords[r * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)]);
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    try {
      axes.push_back(infer_axis(u));
    } catch (const Error& e) {
      throw Error(e.code(), source + ": axis " + kAxisNames[d] + ": " + e.what());
    }
    expected *= axes.back().count;
  }
  if (rows != expected) {
    throw Error(ErrorCode::IncompleteGrid, source + ": " + std::to_string(rows) + " rows for a grid of " +
                                               std::to_string(expected) + " vertices");
  }

  const auto width = static_cast<std::size_t>(m);
  std::vector<double> values(expected * width);
  std::vector<bool> seen(expected, false);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t flat = 0;
    for (int d = dim - 1; d >= 0; --d) {
      const auto& u = unique[d];
      const double c = coords[r * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)];
      const auto idx = static_cast<std::size_t>(std::lower_bound(u.begin(), u.end(), c) - u.begin());
      flat = flat * u.size() + idx;
    }
    if (seen[flat]) throw Error(ErrorCode::IncompleteGrid, source + ": duplicate vertex in row " + std::to_string(r + 1));
    seen[flat] = true;
    std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(r * width), width,
                values.begin() + static_cast<std::ptrdiff_t>(flat * width));
  }
  return FieldFile{std::move(meta), RegularGrid(std::move(axes), m, std::move(values))};
}

FieldFile load_field_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_field_csv(in, path.string());
}

RegularGrid load_grid_csv(const std::filesystem::path& path) { return load_field_csv(path).grid; }

void write_grid_csv(std::ostream& out, const RegularGrid& grid, const std::vector<std::string>& names) {
  const int dim = grid.dim();
  const int m = grid.components();
  if (static_cast<int>(names.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "need one column name per component");
  }
  for (int d = 0; d < dim; ++d) out << (d ? "," : "") << kAxisNames[d];
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  const auto values = grid.values();
  for (std::size_t flat = 0; flat < grid.vertex_count(); ++flat) {
    std::size_t rem = flat;
    for (int d = 0; d < dim; ++d) {
      const auto& a = grid.axis(d);
      out << (d ? "," : "") << format_double(a.coordinate(static_cast<std::int64_t>(rem % a.count)));
      rem /= a.count;
    }
    for (int c = 0; c < m; ++c) out << ',' << format_double(values[flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(c)]);
    out << '\n';
  }
}

void write_grid_csv(const std::filesystem::path& path, const RegularGrid& grid, const std::vector<std::string>& names) {
  auto out = open_out(path);
  write_grid_csv(out, grid, names);
  if (!out.flush()) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

void write_results_csv(std::ostream& out, int dim, const std::vector<std::string>& names,
                       std::span<const double> points, std::span<const std::optional<QueryResult>> results) {
  const auto udim = static_cast<std::size_t>(dim);
  if (points.size() != results.size() * udim) {
    throw Error(ErrorCode::DimensionMismatch, "results are not aligned with points");
  }
  for (int d = 0; d < dim; ++d) out << (d ? "," : "") << kAxisNames[d];
  for (const auto& n : names) out << ',' << n;
  for (const auto& n : names) {
    for (int d = 0; d < dim; ++d) out << ",d" << n << "_d" << kAxisNames[d];
  }
  out << ",error\n";

  const std::size_t result_columns = names.size() * (1 + udim);
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (std::size_t d = 0; d < udim; ++d) out << (d ? "," : "") << format_double(points[i * udim + d]);
    const auto& r = results[i];
    if (!r) {
      for (std::size_t k = 0; k < result_columns; ++k) out << ",NaN";
      out << ',' << to_string(ErrorCode::OutOfDomain) << '\n';
      continue;
    }
    for (double v : r->values) out << ',' << format_double(v);
    for (double g : r->gradient) out << ',' << format_double(g);
    out << ",\n";
  }
}

void write_results_csv(const std::filesystem::path& path, int dim, const std::vector<std::string>& names,
                       std::span<const double> points, std::span<const std::optional<QueryResult>> results) {
  auto out = open_out(path);
  write_results_csv(out, dim, names, points, results);
  if (!out.flush()) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

std::vector<double> read_points_csv(std::istream& in, int dim) {
  std::vector<double> points;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (first && !fields.empty() && fields[0] == "x") {
      first = false;
      continue;
    }
    first = false;
    if (static_cast<int>(fields.size()) != dim) {
      throw Error(ErrorCode::MalformedInput, "points line " + std::to_string(line_no) + ": expected " +
                                                 std::to_string(dim) + " coordinates");
    }
    for (auto f : fields) {
      const auto v = parse_double(f);
      if (!v) {
        throw Error(ErrorCode::MalformedInput,
                    "points line " + std::to_string(line_no) + ": cannot parse '" + std::string(f) + "'");
      }
      points.push_back(*v);
    }
  }
  return points;
}

std::vector<double> load_points_csv(const std::filesystem::path& path, int dim) {
  auto in = open_in(path);
  return read_points_csv(in, dim);
}

std::uint64_t sample_checksum(const RegularGrid& grid) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  std::string bytes;
  for (double v : grid.values()) {
    bytes.clear();
    put_le(bytes, v);
    for (unsigned char b : bytes) {
      hash ^= b;
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

void save_cache(std::ostream& out, const Interpolator& interp) {
  const auto& grid = interp.grid();
  const int dim = grid.dim();
  std::string buf(kMagic, sizeof(kMagic));
  put_le(buf, kCacheFormatVersion);
  put_le(buf, static_cast<std::uint32_t>(dim));
  for (const auto& a : grid.axes()) put_le(buf, static_cast<std::uint32_t>(a.count));
  for (const auto& a : grid.axes()) put_le(buf, a.origin);
  for (const auto& a : grid.axes()) put_le(buf, a.spacing);
  put_le(buf, static_cast<std::uint32_t>(grid.components()));
  put_le(buf, sample_checksum(grid));

  const auto entries = interp.cache_snapshot();
  put_le(buf, static_cast<std::uint64_t>(entries.size()));
  for (const auto& [elem, tensor] : entries) {
    for (int d = 0; d < dim; ++d) put_le(buf, static_cast<std::uint32_t>(elem.base[d]));
    for (double c : tensor->coeffs) put_le(buf, c);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void save_cache(const std::filesystem::path& path, const Interpolator& interp) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  save_cache(out, interp);
  if (!out.flush()) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

void load_cache(std::span<const unsigned char> bytes, const Interpolator& interp) {
  const auto& grid = interp.grid();
  const int dim = grid.dim();
  Reader r(bytes);
  const auto magic = r.take(sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) throw Error(ErrorCode::BadMagic, "not a QCUB cache file");
  const auto version = r.get<std::uint16_t>();
  if (version != kCacheFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, "unsupported cache version " + std::to_string(version));
  }

  auto mismatch = [](const std::string& what) {
    return Error(ErrorCode::FingerprintMismatch, "cache was built for a different grid (" + what + ")");
  };
  if (r.get<std::uint32_t>() != static_cast<std::uint32_t>(dim)) throw mismatch("dimension");
  for (const auto& a : grid.axes()) {
    if (r.get<std::uint32_t>() != a.count) throw mismatch("counts");
  }
  for (const auto& a : grid.axes()) {
    if (std::bit_cast<std::uint64_t>(r.get<double>()) != std::bit_cast<std::uint64_t>(a.origin)) throw mismatch("origins");
  }
  for (const auto& a : grid.axes()) {
    if (std::bit_cast<std::uint64_t>(r.get<double>()) != std::bit_cast<std::uint64_t>(a.spacing)) throw mismatch("spacings");
  }
  if (r.get<std::uint32_t>() != static_cast<std::uint32_t>(grid.components())) throw mismatch("components");
  if (r.get<std::uint64_t>() != sample_checksum(grid)) throw mismatch("sample checksum");

  const auto count = r.get<std::uint64_t>();
  const std::size_t width = stencil_size(dim) * static_cast<std::size_t>(grid.components());
  const std::size_t entry_bytes = static_cast<std::size_t>(dim) * 4 + width * 8;
  if (count > r.remaining() / entry_bytes) throw Error(ErrorCode::TruncatedFile, "cache file is truncated");

  std::vector<std::pair<ElementRef, CoefficientTensor>> entries;
  entries.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    ElementRef elem;
    for (int d = 0; d < dim; ++d) elem.base[d] = r.get<std::uint32_t>();
    CoefficientTensor tensor{dim, grid.components(), std::vector<double>(width)};
    for (auto& c : tensor.coeffs) c = r.get<double>();
    entries.emplace_back(elem, std::move(tensor));
  }
  if (r.remaining() != 0) throw Error(ErrorCode::MalformedInput, "trailing bytes after cache entries");
  interp.insert_cached(entries);
}

void load_cache(const std::filesystem::path& path, const Interpolator& interp) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  load_cache(bytes, interp);
}

}  // namespace hyperspline
