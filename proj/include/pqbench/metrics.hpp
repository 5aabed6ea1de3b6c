#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pqbench/runner.hpp"

namespace pqbench {

inline constexpr std::string_view kCsvHeader =
    "scenario,suite,run,seed,handshake_time_s,total_download_time_s,file_bytes,"
    "transfer_rate_Bps,valid";

// Box-plot statistics. Quartiles use linear interpolation at position p*(n-1)
// over the sorted sample; whiskers are the most extreme data points within
// 1.5*IQR of the quartiles; everything outside is an outlier.
struct StatsSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;  // ascending
};

// Throws std::invalid_argument on an empty or NaN-bearing sample.
StatsSummary summarize(std::span<const double> values);

// 100 * (candidate - baseline) / baseline. Throws std::invalid_argument
// when baseline_mean <= 0.
double percent_delta(double baseline_mean, double candidate_mean);

// file_bytes / total_download_time_s. Throws std::invalid_argument on a
// non-positive duration.
double transfer_rate(const TimingSample& sample);

struct ComparisonRow {
  std::string metric;  // "handshake_time_s" or "total_download_time_s"
  std::string suite;
  double baseline_mean = 0.0;
  double candidate_mean = 0.0;
  double delta_pct = 0.0;
  bool within_10pct = false;  // delta_pct < low threshold (decreases always pass)
  bool within_20pct = false;  // delta_pct < high threshold
};

struct ComparisonReport {
  std::string baseline_suite;
  double threshold_low_pct = 10.0;
  double threshold_high_pct = 20.0;
  std::vector<ComparisonRow> rows;
  std::map<std::string, int> excluded_n;  // invalid runs per suite, not summarized
};

// Mean-based deltas of every non-baseline suite against the baseline, both
// metrics, valid samples only. Throws ConfigError when the baseline suite is
// missing or has no valid samples.
ComparisonReport compare(const RunResults& results, std::string_view baseline_suite,
                         double threshold_low_pct = 10.0, double threshold_high_pct = 20.0);

// Fixed-width text table for the report.
std::string format_comparison(const ComparisonReport& report);

// Canonical CSV: exact header above, rows in (suite, run) order, times with
// nine fractional digits, LF line endings. Byte-identical across reruns of
// the same results.
void write_csv(const RunResults& results, const std::filesystem::path& path);

struct CsvRow {
  std::string scenario;
  std::string suite;
  int run = 0;
  std::uint64_t seed = 0;
  double handshake_time_s = 0.0;
  double total_download_time_s = 0.0;
  std::uint64_t file_bytes = 0;
  double transfer_rate_Bps = 0.0;
  bool valid = true;
  std::string swept_value;  // only when the file carries the sweep column
};

struct CsvData {
  bool has_swept_column = false;
  std::vector<CsvRow> rows;
};

// Throws ConfigError naming the offending line on malformed input, IoError
// when the file cannot be opened.
CsvData read_csv(const std::filesystem::path& path);

// Same stats pipeline over parsed rows (valid rows only).
ComparisonReport compare_csv(const CsvData& data, std::string_view baseline_suite,
                             double threshold_low_pct = 10.0, double threshold_high_pct = 20.0);

// One CSV spanning all sweep points with a swept_value column appended.
// swept_values[i] is the pre-formatted value for points[i].
void write_sweep_csv(const std::vector<RunResults>& points,
                     const std::vector<std::string>& swept_values,
                     const std::filesystem::path& path);

// Self-contained SVG box plot (median line, IQR box, 1.5*IQR whiskers,
// outlier marks) plus a JSON sidecar next to it (same stem, .json) holding
// exactly the numbers plotted.
void emit_boxplot(const std::vector<std::pair<std::string, StatsSummary>>& per_suite,
                  std::string_view metric_name, const std::filesystem::path& svg_path);

}  // namespace pqbench
