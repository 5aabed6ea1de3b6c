// pqbench: deterministic handshake/download timing benchmark over an
// emulated impaired link, comparing classical and hybrid post-quantum
// cipher suite shapes.
//
// Exit codes: 0 success, 1 scenario or validation problem, 2 I/O trouble.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pqbench/errors.hpp"
#include "pqbench/metrics.hpp"
#include "pqbench/runner.hpp"
#include "pqbench/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace pqbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

struct CommonFlags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  int runs = 0;
  std::string out_dir;
  bool latency_is_rtt = false;
  std::string suite_overrides;
  bool per_flight_acks = false;
  int workers = 0;
  bool quiet = false;
};

void progress(const CommonFlags& flags, const std::string& message) {
  if (!flags.quiet) std::cerr << message << "\n";
}

std::vector<CryptoSuite> catalog_with_overrides(const std::string& overrides_path) {
  auto catalog = builtin_catalog();
  if (!overrides_path.empty()) apply_suite_overrides(catalog, overrides_path);
  return catalog;
}

void apply_common_spec_flags(ScenarioSpec& spec, const CommonFlags& flags) {
  if (flags.seed_set) spec.base_seed = flags.seed;
  if (flags.runs > 0) spec.runs = flags.runs;
  if (flags.latency_is_rtt) spec.profile.one_way_latency_s /= 2.0;
  if (flags.per_flight_acks) spec.session.piggyback_handshake_acks = false;
}

struct SuiteStats {
  std::string name;
  StatsSummary handshake;
  StatsSummary total;
  int excluded = 0;
  bool has_valid = false;
};

std::vector<SuiteStats> per_suite_stats(const RunResults& results) {
  std::vector<SuiteStats> all;
  for (std::size_t i = 0; i < results.spec.suites.size(); ++i) {
    SuiteStats stats;
    stats.name = results.spec.suites[i];
    std::vector<double> handshake, total;
    for (const auto& sample : results.samples[i]) {
      if (!sample.valid) {
        stats.excluded += 1;
        continue;
      }
      handshake.push_back(sample.handshake_time_s);
      total.push_back(sample.total_download_time_s);
    }
    if (!handshake.empty()) {
      stats.handshake = summarize(handshake);
      stats.total = summarize(total);
      stats.has_valid = true;
    }
    all.push_back(std::move(stats));
  }
  return all;
}

void print_summary_table(const RunResults& results, const std::vector<SuiteStats>& stats) {
  std::printf("scenario %s: latency %.0f ms one-way, loss %.2f%%, file %llu bytes, %d runs\n",
              results.spec.name.c_str(), results.spec.profile.one_way_latency_s * 1000.0,
              results.spec.profile.loss_rate * 100.0,
              static_cast<unsigned long long>(results.spec.file_bytes), results.spec.runs);
  std::printf("%-16s %5s %5s %12s %12s %12s %12s %14s\n", "suite", "n", "excl", "hs_mean",
              "hs_median", "total_mean", "total_median", "rate_mean_Bps");
  for (const auto& s : stats) {
    if (!s.has_valid) {
      std::printf("%-16s %5d %5d %12s %12s %12s %12s %14s\n", s.name.c_str(), 0, s.excluded, "-",
                  "-", "-", "-", "-");
      continue;
    }
    const double denominator = s.total.mean;
    const double rate_mean =
        denominator > 0.0 ? static_cast<double>(results.spec.file_bytes) / denominator : 0.0;
    std::printf("%-16s %5zu %5d %12.6f %12.6f %12.6f %12.6f %14.1f\n", s.name.c_str(), s.handshake.n,
                s.excluded, s.handshake.mean, s.handshake.median, s.total.mean, s.total.median,
                rate_mean);
  }
}

void write_scenario_outputs(const RunResults& results, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_csv(results, out_dir / "results.csv");
  const auto stats = per_suite_stats(results);
  std::vector<std::pair<std::string, StatsSummary>> handshake, total;
  for (const auto& s : stats) {
    if (!s.has_valid) continue;
    handshake.emplace_back(s.name, s.handshake);
    total.emplace_back(s.name, s.total);
  }
  if (!handshake.empty()) {
    emit_boxplot(handshake, "handshake_time_s", out_dir / "handshake_box.svg");
    emit_boxplot(total, "total_download_time_s", out_dir / "download_box.svg");
  }
}

int cmd_run(const std::string& preset_or_file, const CommonFlags& flags) {
  auto catalog = catalog_with_overrides(flags.suite_overrides);

  ScenarioSpec spec;
  const bool is_preset =
      std::find(preset_names().begin(), preset_names().end(), preset_or_file) !=
      preset_names().end();
  if (is_preset) {
    spec = preset(preset_or_file);
  } else if (fs::exists(preset_or_file)) {
    spec = load_scenario(preset_or_file);
  } else {
    std::ostringstream msg;
    msg << "'" << preset_or_file << "' is neither a preset nor a scenario file; presets:";
    for (const auto& name : preset_names()) msg << " " << name;
    throw ConfigError(msg.str());
  }
  apply_common_spec_flags(spec, flags);

  progress(flags, "running scenario '" + spec.name + "' (" +
                      std::to_string(spec.suites.size()) + " suites x " +
                      std::to_string(spec.runs) + " runs)");
  ExecuteOptions exec;
  exec.workers = flags.workers;
  const RunResults results = execute(spec, catalog, exec);

  const fs::path out_dir =
      flags.out_dir.empty() ? fs::path("pqbench_out") / spec.name : fs::path(flags.out_dir);
  write_scenario_outputs(results, out_dir);
  progress(flags, "wrote " + (out_dir / "results.csv").string());

  print_summary_table(results, per_suite_stats(results));
  return kExitOk;
}

int cmd_sweep(const std::string& kind, std::uint64_t max_bytes, bool full_range,
              const CommonFlags& flags) {
  auto catalog = catalog_with_overrides(flags.suite_overrides);

  const int runs = flags.runs > 0 ? flags.runs : 10;
  const std::uint64_t base_seed = flags.seed_set ? flags.seed : 1;

  std::vector<ScenarioSpec> specs;
  std::vector<std::string> swept_values;
  char value_text[48];
  if (kind == "file-size") {
    const std::uint64_t cap = full_range ? kFullFileSweepCapBytes : max_bytes;
    specs = sweep_file_size(cap, runs, base_seed);
    for (const auto& spec : specs) {
      std::snprintf(value_text, sizeof(value_text), "%llu",
                    static_cast<unsigned long long>(spec.file_bytes));
      swept_values.emplace_back(value_text);
    }
  } else if (kind == "latency") {
    specs = sweep_latency(runs, base_seed);
    for (const auto& spec : specs) {
      std::snprintf(value_text, sizeof(value_text), "%.9f", spec.profile.one_way_latency_s);
      swept_values.emplace_back(value_text);
    }
  } else if (kind == "loss") {
    specs = sweep_loss(runs, base_seed);
    for (const auto& spec : specs) {
      std::snprintf(value_text, sizeof(value_text), "%.9f", spec.profile.loss_rate);
      swept_values.emplace_back(value_text);
    }
  } else {
    throw ConfigError("unknown sweep kind '" + kind +
                      "'; valid kinds: file-size latency loss");
  }

  for (auto& spec : specs) {
    if (flags.latency_is_rtt) spec.profile.one_way_latency_s /= 2.0;
    if (flags.per_flight_acks) spec.session.piggyback_handshake_acks = false;
  }

  ExecuteOptions exec;
  exec.workers = flags.workers;
  std::vector<RunResults> points;
  points.reserve(specs.size());
  for (const auto& spec : specs) {
    progress(flags, "sweep point '" + spec.name + "'");
    points.push_back(execute(spec, catalog, exec));
  }

  const fs::path out_dir =
      flags.out_dir.empty() ? fs::path("pqbench_out") / ("sweep_" + kind) : fs::path(flags.out_dir);
  fs::create_directories(out_dir);
  write_sweep_csv(points, swept_values, out_dir / "sweep.csv");

  // Per-point summaries, same numbers the box plots would carry.
  nlohmann::ordered_json summaries = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < points.size(); ++p) {
    nlohmann::ordered_json point;
    point["scenario"] = points[p].spec.name;
    point["swept_value"] = swept_values[p];
    point["suites"] = nlohmann::ordered_json::array();
    for (const auto& s : per_suite_stats(points[p])) {
      nlohmann::ordered_json entry;
      entry["name"] = s.name;
      entry["excluded_n"] = s.excluded;
      if (s.has_valid) {
        for (const auto& [metric, stats] :
             {std::pair<const char*, const StatsSummary*>{"handshake_time_s", &s.handshake},
              std::pair<const char*, const StatsSummary*>{"total_download_time_s", &s.total}}) {
          nlohmann::ordered_json m;
          m["n"] = stats->n;
          m["mean"] = stats->mean;
          m["median"] = stats->median;
          m["q1"] = stats->q1;
          m["q3"] = stats->q3;
          m["iqr"] = stats->iqr;
          m["whisker_low"] = stats->whisker_low;
          m["whisker_high"] = stats->whisker_high;
          m["outliers"] = stats->outliers;
          entry[metric] = std::move(m);
        }
      }
      point["suites"].push_back(std::move(entry));
    }
    summaries.push_back(std::move(point));
  }
  {
    std::ofstream out(out_dir / "summaries.json", std::ios::binary);
    if (!out) throw IoError("cannot open '" + (out_dir / "summaries.json").string() + "'");
    out << summaries.dump(2) << '\n';
  }
  progress(flags, "wrote " + (out_dir / "sweep.csv").string());

  std::printf("sweep %s: %zu points x %zu suites x %d runs -> %s\n", kind.c_str(), points.size(),
              points.empty() ? 0 : points.front().spec.suites.size(), runs,
              (out_dir / "sweep.csv").string().c_str());
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::printf("  %-24s swept_value=%s\n", points[p].spec.name.c_str(), swept_values[p].c_str());
  }
  return kExitOk;
}

int cmd_compare(const std::string& csv_path, const std::string& baseline, double low, double high,
                bool fail_over_threshold) {
  const CsvData data = read_csv(csv_path);
  if (data.rows.empty()) throw ConfigError(csv_path + ": no data rows to compare");
  const ComparisonReport report = compare_csv(data, baseline, low, high);
  std::fputs(format_comparison(report).c_str(), stdout);
  if (fail_over_threshold) {
    for (const auto& row : report.rows) {
      if (!row.within_10pct || !row.within_20pct) return kExitConfig;
    }
  }
  return kExitOk;
}

int cmd_report(const std::string& csv_path, const std::string& out_dir_arg) {
  const CsvData data = read_csv(csv_path);
  if (data.rows.empty()) throw ConfigError(csv_path + ": no data rows");

  std::vector<std::string> order;
  std::map<std::string, SuiteStats> by_suite;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
  for (const auto& row : data.rows) {
    if (!by_suite.count(row.suite)) {
      order.push_back(row.suite);
      by_suite[row.suite] = SuiteStats{row.suite, {}, {}, 0, false};
    }
    if (!row.valid) {
      by_suite[row.suite].excluded += 1;
      continue;
    }
    series[row.suite].first.push_back(row.handshake_time_s);
    series[row.suite].second.push_back(row.total_download_time_s);
  }

  std::printf("%-16s %5s %5s %12s %12s %12s %12s\n", "suite", "n", "excl", "hs_mean", "hs_median",
              "total_mean", "total_median");
  std::vector<std::pair<std::string, StatsSummary>> handshake, total;
  for (const auto& name : order) {
    auto& stats = by_suite[name];
    const auto it = series.find(name);
    if (it == series.end() || it->second.first.empty()) {
      std::printf("%-16s %5d %5d %12s %12s %12s %12s\n", name.c_str(), 0, stats.excluded, "-", "-",
                  "-", "-");
      continue;
    }
    stats.handshake = summarize(it->second.first);
    stats.total = summarize(it->second.second);
    handshake.emplace_back(name, stats.handshake);
    total.emplace_back(name, stats.total);
    std::printf("%-16s %5zu %5d %12.6f %12.6f %12.6f %12.6f\n", name.c_str(), stats.handshake.n,
                stats.excluded, stats.handshake.mean, stats.handshake.median, stats.total.mean,
                stats.total.median);
  }
  if (!out_dir_arg.empty() && !handshake.empty()) {
    fs::create_directories(out_dir_arg);
    emit_boxplot(handshake, "handshake_time_s", fs::path(out_dir_arg) / "handshake_box.svg");
    emit_boxplot(total, "total_download_time_s", fs::path(out_dir_arg) / "download_box.svg");
  }
  return kExitOk;
}

int cmd_suites(const std::string& overrides_path) {
  const auto catalog = catalog_with_overrides(overrides_path);
  std::printf("%-16s %-14s %-22s %10s %10s %8s %8s\n", "suite", "kem", "sig", "client_sh",
              "server_sh", "sig_pk", "sig_len");
  for (const auto& suite : catalog) {
    std::printf("%-16s %-14s %-22s %10llu %10llu %8llu %8llu\n", suite.name.c_str(),
                suite.kem.name.c_str(), suite.sig.name.c_str(),
                static_cast<unsigned long long>(suite.kem.client_share_bytes),
                static_cast<unsigned long long>(suite.kem.server_share_bytes),
                static_cast<unsigned long long>(suite.sig.public_key_bytes),
                static_cast<unsigned long long>(suite.sig.signature_bytes));
  }
  std::printf("\n%-16s %12s %12s %12s %12s\n", "suite", "client_hello", "server_flight",
              "client_fin", "total");
  for (const auto& suite : catalog) {
    const auto fs_ = flight_sizes(suite);
    std::printf("%-16s %12llu %12llu %12llu %12llu\n", suite.name.c_str(),
                static_cast<unsigned long long>(fs_.client_hello),
                static_cast<unsigned long long>(fs_.server_flight),
                static_cast<unsigned long long>(fs_.client_finished),
                static_cast<unsigned long long>(fs_.total()));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pqbench: deterministic TLS-shaped handshake and download timing over an "
      "emulated impaired network, for classical and hybrid post-quantum suites"};
  app.require_subcommand(1);

  CommonFlags flags;

  // run
  std::string run_target;
  auto* run = app.add_subcommand("run", "Run one scenario (preset: ideal, normal, congested; or a JSON scenario file)");
  run->add_option("preset-or-file", run_target,
                  "Preset name (ideal, normal, congested) or scenario file path")
      ->required();
  run->add_option("--seed", flags.seed, "Base seed for run-seed derivation")
      ->each([&](const std::string&) { flags.seed_set = true; });
  run->add_option("--runs", flags.runs, "Override the scenario's run count");
  run->add_option("--out-dir", flags.out_dir, "Output directory (default pqbench_out/<scenario>)");
  run->add_flag("--latency-is-rtt", flags.latency_is_rtt,
                "Treat configured latency as round-trip and halve it");
  run->add_option("--suite-overrides", flags.suite_overrides,
                  "JSON file overriding suite sizes and costs");
  run->add_flag("--per-flight-acks", flags.per_flight_acks,
                "Each handshake flight waits for its own ACK (default: piggybacked)");
  run->add_option("--workers", flags.workers,
                  "Worker threads (default: PQBENCH_WORKERS env, else hardware)");
  run->add_flag("--quiet", flags.quiet, "Suppress progress on stderr");

  // sweep
  std::string sweep_kind;
  std::uint64_t max_bytes = kDeskFileSweepCapBytes;
  bool full_range = false;
  auto* sweep = app.add_subcommand("sweep", "Sweep one variable (kinds: file-size, latency, loss)");
  sweep->add_option("kind", sweep_kind, "One of: file-size, latency, loss")->required();
  sweep->add_option("--max-bytes", max_bytes,
                    "file-size sweep cap (default 67108864; sizes double from 244)");
  sweep->add_flag("--full-range", full_range,
                  "file-size sweep up to 16 GiB (slow, simulates ~11M segments per run)");
  sweep->add_option("--runs", flags.runs, "Runs per sweep point (default 10)");
  sweep->add_option("--seed", flags.seed, "Base seed shared by all points")
      ->each([&](const std::string&) { flags.seed_set = true; });
  sweep->add_option("--out-dir", flags.out_dir, "Output directory (default pqbench_out/sweep_<kind>)");
  sweep->add_flag("--latency-is-rtt", flags.latency_is_rtt,
                  "Treat configured latency as round-trip and halve it");
  sweep->add_option("--suite-overrides", flags.suite_overrides,
                    "JSON file overriding suite sizes and costs");
  sweep->add_flag("--per-flight-acks", flags.per_flight_acks,
                  "Each handshake flight waits for its own ACK");
  sweep->add_option("--workers", flags.workers, "Worker threads");
  sweep->add_flag("--quiet", flags.quiet, "Suppress progress on stderr");

  // compare
  std::string compare_csv_path, baseline = "classical";
  double low_threshold = 10.0, high_threshold = 20.0;
  bool fail_over_threshold = false;
  auto* comparison = app.add_subcommand("compare", "Compare suites in a results CSV against a baseline");
  comparison->add_option("csv", compare_csv_path, "results.csv or sweep.csv path")->required();
  comparison->add_option("--baseline", baseline, "Baseline suite (default classical)");
  comparison->add_option("--low-threshold", low_threshold,
                         "Strict verdict threshold in percent (default 10)");
  comparison->add_option("--high-threshold", high_threshold,
                         "Loose verdict threshold in percent (default 20)");
  comparison->add_flag("--fail-over-threshold", fail_over_threshold,
                       "Exit 1 when any delta breaches a threshold");

  // report
  std::string report_csv_path, report_out_dir;
  auto* report = app.add_subcommand("report", "Per-suite statistics for a results CSV");
  report->add_option("csv", report_csv_path, "results.csv or sweep.csv path")->required();
  report->add_option("--out-dir", report_out_dir, "Also write box plots here");

  // suites
  std::string suites_overrides;
  auto* suites = app.add_subcommand("suites", "Print the suite catalog and flight sizes");
  suites->add_option("--suite-overrides", suites_overrides,
                     "JSON file overriding suite sizes and costs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    // Usage errors share kExitConfig with value errors; --help stays 0.
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_target, flags);
    if (sweep->parsed()) return cmd_sweep(sweep_kind, max_bytes, full_range, flags);
    if (comparison->parsed()) {
      return cmd_compare(compare_csv_path, baseline, low_threshold, high_threshold,
                         fail_over_threshold);
    }
    if (report->parsed()) return cmd_report(report_csv_path, report_out_dir);
    if (suites->parsed()) return cmd_suites(suites_overrides);
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIo;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
