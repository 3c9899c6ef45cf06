// Copyright 2026 The Hyperspline Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "hyperspline/fields.hpp"
#include "hyperspline/io.hpp"

namespace hyperspline::cli {

namespace {

constexpr const char* kAxisNames[] = {"x", "y", "z", "t"};

struct CliConfig {
  std::string input;
  std::string policy = "strict";
  std::string out;
  std::vector<std::string> point_args;
  std::string points_file;
  std::string counts;
  std::string region_min;
  std::string region_max;
  std::uint64_t seed = 1;
  std::size_t n = 100000;
  std::string mode = "warm";
  bool one_element = false;
  bool key_value = false;
  int dim = 4;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

BoundaryPolicy parse_policy(const std::string& s) {
  if (s == "strict") return BoundaryPolicy::Strict;
  if (s == "linear-ghost") return BoundaryPolicy::LinearGhost;
  throw UsageError("unknown policy '" + s + "' (expected strict or linear-ghost)");
}

const char* policy_name(BoundaryPolicy p) { return p == BoundaryPolicy::Strict ? "strict" : "linear-ghost"; }

std::vector<double> parse_list(const std::string& s, std::size_t expected, const std::string& what) {
  std::istringstream in(s);
  std::vector<double> out;
  try {
    out = read_points_csv(in, static_cast<int>(expected));
  } catch (const Error&) {
    throw UsageError(what + " needs " + std::to_string(expected) + " comma-separated numbers, got '" + s + "'");
  }
  if (out.size() != expected) {
    throw UsageError(what + " needs " + std::to_string(expected) + " comma-separated numbers, got '" + s + "'");
  }
  return out;
}

unsigned env_threads() {
  const char* raw = std::getenv("HYPERSPLINE_THREADS");
  if (!raw) return 0;
  unsigned v = 0;
  const std::string_view s(raw);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size() ? v : 0;
}

std::string domain_text(const RegularGrid& grid, BoundaryPolicy policy) {
  std::string s;
  for (int d = 0; d < grid.dim(); ++d) {
    auto [lo, hi] = grid.domain(d, policy);
    s += (d ? " x " : "") + std::string("[") + num(lo) + ", " + num(hi) + "]";
  }
  return s;
}

int cmd_info(const CliConfig& cfg, std::ostream& out) {
  const auto file = load_field_csv(cfg.input);
  const auto& grid = file.grid;
  out << "dimension: " << grid.dim() << '\n';
  out << "components: " << grid.components() << " (";
  for (std::size_t i = 0; i < file.header.component_names.size(); ++i) {
    out << (i ? "," : "") << file.header.component_names[i];
  }
  out << ")\n";
  for (int d = 0; d < grid.dim(); ++d) {
    const auto& a = grid.axis(d);
    out << "axis " << kAxisNames[d] << ": origin=" << num(a.origin) << " spacing=" << num(a.spacing)
        << " count=" << a.count << '\n';
  }
  out << "elements: " << grid.element_count() << '\n';
  for (auto policy : {BoundaryPolicy::Strict, BoundaryPolicy::LinearGhost}) {
    out << policy_name(policy) << ": queryable " << domain_text(grid, policy)
        << " valid_elements=" << grid.valid_element_count(policy) << '\n';
  }
  const std::size_t tensor_bytes = stencil_size(grid.dim()) * static_cast<std::size_t>(grid.components()) * sizeof(double);
  const auto policy = parse_policy(cfg.policy);
  out << "memory: samples=" << grid.values().size() * sizeof(double) << " bytes"
      << " full_coefficient_cache=" << grid.valid_element_count(policy) * tensor_bytes << " bytes ("
      << policy_name(policy) << ")\n";
  return kExitOk;
}

int cmd_query(const CliConfig& cfg, std::ostream& out) {
  const auto file = load_field_csv(cfg.input);
  const int dim = file.grid.dim();
  std::vector<double> points;
  for (const auto& p : cfg.point_args) {
    const auto coords = parse_list(p, static_cast<std::size_t>(dim), "--point");
    points.insert(points.end(), coords.begin(), coords.end());
  }
  if (!cfg.points_file.empty()) {
    const auto more = load_points_csv(cfg.points_file, dim);
    points.insert(points.end(), more.begin(), more.end());
  }
  const Interpolator interp(file.grid, parse_policy(cfg.policy));
  const auto results = interp.eval_batch(points, env_threads());
  if (cfg.out.empty()) {
    write_results_csv(out, dim, file.header.component_names, points, results);
  } else {
    write_results_csv(cfg.out, dim, file.header.component_names, points, results);
  }
  return kExitOk;
}

int cmd_sample(const CliConfig& cfg, std::ostream& out) {
  const auto file = load_field_csv(cfg.input);
  const auto& grid = file.grid;
  const auto dim = static_cast<std::size_t>(grid.dim());
  const auto policy = parse_policy(cfg.policy);
  const auto counts = parse_list(cfg.counts, dim, "--counts");
  std::vector<double> lo(dim);
  std::vector<double> hi(dim);
  for (std::size_t d = 0; d < dim; ++d) std::tie(lo[d], hi[d]) = grid.domain(static_cast<int>(d), policy);
  if (!cfg.region_min.empty()) lo = parse_list(cfg.region_min, dim, "--min");
  if (!cfg.region_max.empty()) hi = parse_list(cfg.region_max, dim, "--max");

  std::vector<Axis> axes;
  for (std::size_t d = 0; d < dim; ++d) {
    auto [dlo, dhi] = grid.domain(static_cast<int>(d), policy);
    if (lo[d] < dlo || hi[d] > dhi || !(lo[d] < hi[d])) {
      throw Error(ErrorCode::OutOfDomain, std::string("region along ") + kAxisNames[d] + " [" + num(lo[d]) + ", " +
                                              num(hi[d]) + "] is not inside the queryable domain [" + num(dlo) +
                                              ", " + num(dhi) + "]");
    }
    if (counts[d] < kStencilWidth || counts[d] != static_cast<double>(static_cast<std::size_t>(counts[d]))) {
      throw UsageError("--counts entries must be integers >= 4");
    }
    const auto n = static_cast<std::size_t>(counts[d]);
    axes.push_back(Axis{lo[d], (hi[d] - lo[d]) / static_cast<double>(n - 1), n});
  }

  const Interpolator interp(grid, policy);
  std::size_t vertices = 1;
  for (const auto& a : axes) vertices *= a.count;
  const auto m = static_cast<std::size_t>(grid.components());
  std::vector<double> values(vertices * m);
  std::vector<double> point(dim);
  for (std::size_t flat = 0; flat < vertices; ++flat) {
    std::size_t rem = flat;
    for (std::size_t d = 0; d < dim; ++d) {
      point[d] = axes[d].coordinate(static_cast<std::int64_t>(rem % axes[d].count));
      rem /= axes[d].count;
    }
    const auto v = interp.eval(point);
    std::copy(v.begin(), v.end(), values.begin() + static_cast<std::ptrdiff_t>(flat * m));
  }
  const RegularGrid resampled(axes, grid.components(), std::move(values));
  if (cfg.out.empty()) {
    write_grid_csv(out, resampled, file.header.component_names);
  } else {
    write_grid_csv(cfg.out, resampled, file.header.component_names);
  }
  return kExitOk;
}

int cmd_validate(const CliConfig& cfg, std::ostream& out) {
  ValidationOptions options;
  options.seed = cfg.seed;
  options.policy = parse_policy(cfg.policy);
  if (!cfg.input.empty()) options.grid = std::make_shared<const RegularGrid>(load_grid_csv(cfg.input));

  const auto results = run_validation(options);
  int failures = 0;
  for (const auto& r : results) {
    const char* status = r.status == CheckStatus::Pass ? "PASS" : r.status == CheckStatus::Fail ? "FAIL" : "SKIP";
    if (r.status == CheckStatus::Fail) ++failures;
    if (cfg.key_value) {
      out << "check." << r.name << ".status=" << status << '\n';
      std::istringstream detail(r.detail);
      std::string kv;
      while (detail >> kv) {
        if (kv.find('=') != std::string::npos) out << "check." << r.name << '.' << kv << '\n';
      }
    } else {
      out << status << "  " << r.name << "  " << r.detail << '\n';
    }
  }
  if (cfg.key_value) {
    out << "summary.checks=" << results.size() << "\nsummary.failures=" << failures << '\n';
  } else {
    out << (failures ? "FAILED: " : "OK: ") << results.size() - static_cast<std::size_t>(failures) << '/'
        << results.size() << " checks without failure\n";
  }
  return failures ? kExitValidationFailed : kExitOk;
}

void print_timing(std::ostream& out, const std::string& prefix, const PathTiming& t) {
  out << prefix << ".points=" << t.points << '\n'
      << prefix << ".seconds=" << num(t.seconds) << '\n'
      << prefix << ".points_per_second=" << num(t.points_per_second) << '\n'
      << prefix << ".latency_p50_ns=" << num(t.p50_ns) << '\n'
      << prefix << ".latency_p90_ns=" << num(t.p90_ns) << '\n'
      << prefix << ".latency_p99_ns=" << num(t.p99_ns) << '\n'
      << prefix << ".checksum=" << num(t.checksum) << '\n';
}

int cmd_bench(const CliConfig& cfg, std::ostream& out) {
  BenchMode mode;
  if (cfg.mode == "cold") {
    mode = BenchMode::Cold;
  } else if (cfg.mode == "warm") {
    mode = BenchMode::Warm;
  } else {
    throw UsageError("unknown mode '" + cfg.mode + "' (expected cold or warm)");
  }
  const Interpolator interp(load_grid_csv(cfg.input), parse_policy(cfg.policy));
  const auto points = bench_points(interp, cfg.n, cfg.seed, cfg.one_element);
  const auto report = run_bench(interp, points, mode);
  out << "bench.mode=" << cfg.mode << "\nbench.policy=" << cfg.policy << "\nbench.seed=" << cfg.seed
      << "\nbench.n=" << cfg.n << '\n';
  print_timing(out, "value", report.value);
  print_timing(out, "value_gradient", report.gradient);
  return kExitOk;
}

int cmd_export(const CliConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) throw UsageError("--out directory is required");
  export_operators_csv(operator_set(cfg.dim), cfg.out);
  out << "wrote b.csv, b_inverse.csv, d.csv, a.csv to " << cfg.out << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tricubic and quadcubic spline interpolation of regular field maps"};
  app.name("hyperspline");
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_policy = [&cfg](CLI::App* sub) {
    sub->add_option("--policy", cfg.policy, "Boundary policy: strict or linear-ghost")
        ->check(CLI::IsMember({"strict", "linear-ghost"}))
        ->capture_default_str();
  };

  auto* info = app.add_subcommand("info", "Describe a field-map CSV: axes, domains, element counts, memory");
  info->add_option("grid", cfg.input, "Field-map CSV")->required();
  add_policy(info);

  auto* query = app.add_subcommand("query", "Interpolate values and gradients at query points");
  query->add_option("grid", cfg.input, "Field-map CSV")->required();
  add_policy(query);
  query->add_option("--point", cfg.point_args, "Comma-separated coordinates (repeatable)")->expected(1)->take_all();
  query->add_option("--points", cfg.points_file, "CSV file with one point per line");
  query->add_option("--out", cfg.out, "Output CSV (default: stdout)");

  auto* sample_cmd = app.add_subcommand("sample", "Resample the interpolant on a new regular lattice");
  sample_cmd->add_option("grid", cfg.input, "Field-map CSV")->required();
  add_policy(sample_cmd);
  sample_cmd->add_option("--counts", cfg.counts, "Points per axis, comma-separated (each >= 4)")->required();
  sample_cmd->add_option("--min", cfg.region_min, "Region lower corner (default: domain lower corner)");
  sample_cmd->add_option("--max", cfg.region_max, "Region upper corner (default: domain upper corner)");
  sample_cmd->add_option("--out", cfg.out, "Output CSV (default: stdout)");

  auto* validate = app.add_subcommand("validate", "Run the built-in accuracy and continuity checks");
  validate->add_option("grid", cfg.input, "Optional field-map CSV to scan instead of the built-in fields");
  add_policy(validate);
  validate->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  validate->add_flag("--kv", cfg.key_value, "Print machine-readable key=value lines");

  auto* bench = app.add_subcommand("bench", "Measure query throughput and latency");
  bench->add_option("grid", cfg.input, "Field-map CSV")->required();
  add_policy(bench);
  bench->add_option("--n", cfg.n, "Number of query points")->capture_default_str();
  bench->add_option("--mode", cfg.mode, "cold or warm coefficient cache")
      ->check(CLI::IsMember({"cold", "warm"}))
      ->capture_default_str();
  bench->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  bench->add_flag("--one-element", cfg.one_element, "Draw all points from the first valid element");

  auto* exp = app.add_subcommand("export-operators", "Write the B, B^-1, D and A matrices as CSV");
  exp->add_option("--dim", cfg.dim, "Dimension (3 or 4)")->check(CLI::IsMember({3, 4}))->capture_default_str();
  exp->add_option("--out", cfg.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (info->parsed()) return cmd_info(cfg, out);
    if (query->parsed()) return cmd_query(cfg, out);
    if (sample_cmd->parsed()) return cmd_sample(cfg, out);
    if (validate->parsed()) return cmd_validate(cfg, out);
    if (bench->parsed()) return cmd_bench(cfg, out);
    if (exp->parsed()) return cmd_export(cfg, out);
  } catch (const UsageError& e) {
    err << "hyperspline: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "hyperspline: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hyperspline::cli
