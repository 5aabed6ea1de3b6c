#include "pqbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pqbench/errors.hpp"

#include "json.hpp"

namespace pqbench {

namespace {

double interpolated_quantile(const std::vector<double>& sorted, double p) {
  const double position = p * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(position);
  if (lower + 1 >= sorted.size()) return sorted[lower];
  const double fraction = position - static_cast<double>(lower);
  return sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower]);
}

std::string format_fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

std::string format_time9(double value) { return format_fixed(value, 9); }

}  // namespace

StatsSummary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: need at least one sample");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (std::isnan(v)) throw std::invalid_argument("summarize: NaN sample");
  }
  std::sort(sorted.begin(), sorted.end());

  StatsSummary stats;
  stats.n = sorted.size();
  double sum = 0.0;
  for (double v : sorted) sum += v;
  stats.mean = sum / static_cast<double>(sorted.size());
  stats.q1 = interpolated_quantile(sorted, 0.25);
  stats.median = interpolated_quantile(sorted, 0.50);
  stats.q3 = interpolated_quantile(sorted, 0.75);
  stats.iqr = stats.q3 - stats.q1;

  const double fence_low = stats.q1 - 1.5 * stats.iqr;
  const double fence_high = stats.q3 + 1.5 * stats.iqr;
  stats.whisker_low = stats.q1;
  stats.whisker_high = stats.q3;
  for (double v : sorted) {
    if (v >= fence_low) {
      stats.whisker_low = v;  // smallest in-fence point
      break;
    }
  }
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (*it <= fence_high) {
      stats.whisker_high = *it;  // largest in-fence point
      break;
    }
  }
  for (double v : sorted) {
    if (v < fence_low || v > fence_high) stats.outliers.push_back(v);
  }
  return stats;
}

double percent_delta(double baseline_mean, double candidate_mean) {
  if (!(baseline_mean > 0.0)) {
    throw std::invalid_argument("percent_delta: baseline mean must be > 0");
  }
  return 100.0 * (candidate_mean - baseline_mean) / baseline_mean;
}

double transfer_rate(const TimingSample& sample) {
  if (!(sample.total_download_time_s > 0.0)) {
    throw std::invalid_argument("transfer_rate: total download time must be > 0");
  }
  return static_cast<double>(sample.file_bytes) / sample.total_download_time_s;
}

namespace {

struct SuiteSeries {
  std::vector<double> handshake;
  std::vector<double> total;
  int excluded = 0;
};

ComparisonReport compare_series(const std::vector<std::pair<std::string, SuiteSeries>>& series,
                                std::string_view baseline_suite, double low, double high) {
  const SuiteSeries* baseline = nullptr;
  for (const auto& [name, data] : series) {
    if (name == baseline_suite) baseline = &data;
  }
  if (baseline == nullptr) {
    throw ConfigError("baseline suite '" + std::string(baseline_suite) + "' not present");
  }
  if (baseline->handshake.empty()) {
    throw ConfigError("baseline suite '" + std::string(baseline_suite) + "' has no valid runs");
  }

  const auto mean_of = [](const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
  };
  const double baseline_handshake = mean_of(baseline->handshake);
  const double baseline_total = mean_of(baseline->total);

  ComparisonReport report;
  report.baseline_suite = std::string(baseline_suite);
  report.threshold_low_pct = low;
  report.threshold_high_pct = high;

  for (const auto& [name, data] : series) {
    report.excluded_n[name] = data.excluded;
    if (name == baseline_suite) continue;
    if (data.handshake.empty()) continue;  // nothing valid to compare, still counted above
    const struct {
      const char* metric;
      double baseline_mean;
      double candidate_mean;
    } metrics[] = {
        {"handshake_time_s", baseline_handshake, mean_of(data.handshake)},
        {"total_download_time_s", baseline_total, mean_of(data.total)},
    };
    for (const auto& m : metrics) {
      ComparisonRow row;
      row.metric = m.metric;
      row.suite = name;
      row.baseline_mean = m.baseline_mean;
      row.candidate_mean = m.candidate_mean;
      row.delta_pct = percent_delta(m.baseline_mean, m.candidate_mean);
      row.within_10pct = row.delta_pct < low;
      row.within_20pct = row.delta_pct < high;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace

ComparisonReport compare(const RunResults& results, std::string_view baseline_suite,
                         double threshold_low_pct, double threshold_high_pct) {
  std::vector<std::pair<std::string, SuiteSeries>> series;
  for (std::size_t i = 0; i < results.spec.suites.size(); ++i) {
    SuiteSeries data;
    for (const auto& sample : results.samples[i]) {
      if (!sample.valid) {
        data.excluded += 1;
        continue;
      }
      data.handshake.push_back(sample.handshake_time_s);
      data.total.push_back(sample.total_download_time_s);
    }
    series.emplace_back(results.spec.suites[i], std::move(data));
  }
  return compare_series(series, baseline_suite, threshold_low_pct, threshold_high_pct);
}

ComparisonReport compare_csv(const CsvData& data, std::string_view baseline_suite,
                             double threshold_low_pct, double threshold_high_pct) {
  std::vector<std::pair<std::string, SuiteSeries>> series;
  const auto slot = [&](const std::string& suite) -> SuiteSeries& {
    for (auto& [name, existing] : series) {
      if (name == suite) return existing;
    }
    series.emplace_back(suite, SuiteSeries{});
    return series.back().second;
  };
  for (const auto& row : data.rows) {
    auto& suite_series = slot(row.suite);
    if (!row.valid) {
      suite_series.excluded += 1;
      continue;
    }
    suite_series.handshake.push_back(row.handshake_time_s);
    suite_series.total.push_back(row.total_download_time_s);
  }
  return compare_series(series, baseline_suite, threshold_low_pct, threshold_high_pct);
}

std::string format_comparison(const ComparisonReport& report) {
  std::ostringstream out;
  out << "baseline: " << report.baseline_suite
      << "   verdicts: delta < " << format_fixed(report.threshold_low_pct, 1)
      << "% / delta < " << format_fixed(report.threshold_high_pct, 1) << "%\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-22s %-16s %14s %14s %10s %7s %7s\n", "metric", "suite",
                "baseline_mean", "candidate_mean", "delta_pct", "low", "high");
  out << line;
  for (const auto& row : report.rows) {
    std::snprintf(line, sizeof(line), "%-22s %-16s %14.6f %14.6f %+9.2f%% %7s %7s\n",
                  row.metric.c_str(), row.suite.c_str(), row.baseline_mean, row.candidate_mean,
                  row.delta_pct, row.within_10pct ? "pass" : "FAIL",
                  row.within_20pct ? "pass" : "FAIL");
    out << line;
  }
  bool any_excluded = false;
  for (const auto& [suite, count] : report.excluded_n) {
    if (count > 0) any_excluded = true;
  }
  if (any_excluded) {
    out << "excluded invalid runs:";
    for (const auto& [suite, count] : report.excluded_n) {
      if (count > 0) out << " " << suite << "=" << count;
    }
    out << "\n";
  }
  return out.str();
}

namespace {

std::string csv_row_text(const std::string& scenario, const TimingSample& sample, int run) {
  std::ostringstream out;
  out << scenario << ',' << sample.suite_name << ',' << run << ',' << sample.seed << ','
      << format_time9(sample.handshake_time_s) << ',' << format_time9(sample.total_download_time_s)
      << ',' << sample.file_bytes << ',' << format_time9(sample.transfer_rate_Bps) << ','
      << (sample.valid ? '1' : '0');
  return out.str();
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (const auto& line : lines) out << line << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_csv(const RunResults& results, const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.emplace_back(kCsvHeader);
  for (std::size_t i = 0; i < results.spec.suites.size(); ++i) {
    for (std::size_t run = 0; run < results.samples[i].size(); ++run) {
      lines.push_back(csv_row_text(results.spec.name, results.samples[i][run],
                                   static_cast<int>(run)));
    }
  }
  write_lines(path, lines);
}

void write_sweep_csv(const std::vector<RunResults>& points,
                     const std::vector<std::string>& swept_values,
                     const std::filesystem::path& path) {
  if (points.size() != swept_values.size()) {
    throw std::invalid_argument("write_sweep_csv: one swept value per point required");
  }
  std::vector<std::string> lines;
  lines.emplace_back(std::string(kCsvHeader) + ",swept_value");
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto& results = points[p];
    for (std::size_t i = 0; i < results.spec.suites.size(); ++i) {
      for (std::size_t run = 0; run < results.samples[i].size(); ++run) {
        lines.push_back(csv_row_text(results.spec.name, results.samples[i][run],
                                     static_cast<int>(run)) +
                        "," + swept_values[p]);
      }
    }
  }
  write_lines(path, lines);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Malformed content is a validation problem (ConfigError), not an I/O one:
// the CLI maps it to exit 1 and the message carries the offending line.
[[noreturn]] void csv_fail(const std::filesystem::path& path, std::size_t line_no,
                           const std::string& what) {
  std::ostringstream msg;
  msg << path.string() << ":" << line_no << ": " << what;
  throw ConfigError(msg.str());
}

}  // namespace

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

  CsvData data;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) csv_fail(path, 1, "empty file, expected the results header");
  line_no = 1;
  if (line == kCsvHeader) {
    data.has_swept_column = false;
  } else if (line == std::string(kCsvHeader) + ",swept_value") {
    data.has_swept_column = true;
  } else {
    csv_fail(path, 1, "unexpected header '" + line + "'");
  }
  const std::size_t expected_fields = data.has_swept_column ? 10 : 9;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) csv_fail(path, line_no, "blank line");
    const auto fields = split_fields(line);
    if (fields.size() != expected_fields) {
      csv_fail(path, line_no,
               "expected " + std::to_string(expected_fields) + " fields, found " +
                   std::to_string(fields.size()));
    }
    CsvRow row;
    row.scenario = fields[0];
    row.suite = fields[1];
    try {
      std::size_t used = 0;
      row.run = std::stoi(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("run");
      row.seed = std::stoull(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument("seed");
      row.handshake_time_s = std::stod(fields[4], &used);
      if (used != fields[4].size()) throw std::invalid_argument("handshake_time_s");
      row.total_download_time_s = std::stod(fields[5], &used);
      if (used != fields[5].size()) throw std::invalid_argument("total_download_time_s");
      row.file_bytes = std::stoull(fields[6], &used);
      if (used != fields[6].size()) throw std::invalid_argument("file_bytes");
      row.transfer_rate_Bps = std::stod(fields[7], &used);
      if (used != fields[7].size()) throw std::invalid_argument("transfer_rate_Bps");
    } catch (const std::exception&) {
      csv_fail(path, line_no, "unparsable numeric field");
    }
    if (fields[8] == "1") {
      row.valid = true;
    } else if (fields[8] == "0") {
      row.valid = false;
    } else {
      csv_fail(path, line_no, "valid flag must be 0 or 1, found '" + fields[8] + "'");
    }
    if (data.has_swept_column) row.swept_value = fields[9];
    data.rows.push_back(std::move(row));
  }
  return data;
}

namespace {

std::string svg_num(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

}  // namespace

void emit_boxplot(const std::vector<std::pair<std::string, StatsSummary>>& per_suite,
                  std::string_view metric_name, const std::filesystem::path& svg_path) {
  if (per_suite.empty()) throw std::invalid_argument("emit_boxplot: no suites");

  double lo = per_suite.front().second.whisker_low;
  double hi = per_suite.front().second.whisker_high;
  for (const auto& [name, stats] : per_suite) {
    lo = std::min(lo, stats.whisker_low);
    hi = std::max(hi, stats.whisker_high);
    for (double v : stats.outliers) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {  // degenerate single-value plot still renders
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double left = 80.0, top = 44.0, bottom = 64.0;
  const double slot = 150.0, box_half = 38.0;
  const double plot_h = 320.0;
  const double width = left + slot * static_cast<double>(per_suite.size()) + 24.0;
  const double height = top + plot_h + bottom;
  const auto y_of = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(width) << "\" height=\""
      << svg_num(height) << "\" viewBox=\"0 0 " << svg_num(width) << " " << svg_num(height)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "  <text x=\"" << svg_num(width / 2.0)
      << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << metric_name << "</text>\n";

  for (int tick = 0; tick <= 5; ++tick) {
    const double value = lo + (hi - lo) * static_cast<double>(tick) / 5.0;
    const double y = y_of(value);
    svg << "  <line x1=\"" << svg_num(left) << "\" y1=\"" << svg_num(y) << "\" x2=\""
        << svg_num(width - 24.0) << "\" y2=\"" << svg_num(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    char label[48];
    std::snprintf(label, sizeof(label), "%.4g", value);
    svg << "  <text x=\"" << svg_num(left - 8.0) << "\" y=\"" << svg_num(y + 4.0)
        << "\" text-anchor=\"end\">" << label << "</text>\n";
  }

  for (std::size_t i = 0; i < per_suite.size(); ++i) {
    const auto& [name, stats] = per_suite[i];
    const double cx = left + slot * (static_cast<double>(i) + 0.5);
    svg << "  <g class=\"box-group\">\n";
    // whiskers with caps
    svg << "    <line x1=\"" << svg_num(cx) << "\" y1=\"" << svg_num(y_of(stats.whisker_low))
        << "\" x2=\"" << svg_num(cx) << "\" y2=\"" << svg_num(y_of(stats.q1))
        << "\" stroke=\"black\"/>\n";
    svg << "    <line x1=\"" << svg_num(cx) << "\" y1=\"" << svg_num(y_of(stats.q3)) << "\" x2=\""
        << svg_num(cx) << "\" y2=\"" << svg_num(y_of(stats.whisker_high))
        << "\" stroke=\"black\"/>\n";
    for (double w : {stats.whisker_low, stats.whisker_high}) {
      svg << "    <line x1=\"" << svg_num(cx - box_half / 2.0) << "\" y1=\"" << svg_num(y_of(w))
          << "\" x2=\"" << svg_num(cx + box_half / 2.0) << "\" y2=\"" << svg_num(y_of(w))
          << "\" stroke=\"black\"/>\n";
    }
    // interquartile box and median line
    svg << "    <rect x=\"" << svg_num(cx - box_half) << "\" y=\"" << svg_num(y_of(stats.q3))
        << "\" width=\"" << svg_num(2.0 * box_half) << "\" height=\""
        << svg_num(std::max(0.0, y_of(stats.q1) - y_of(stats.q3)))
        << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    svg << "    <line x1=\"" << svg_num(cx - box_half) << "\" y1=\"" << svg_num(y_of(stats.median))
        << "\" x2=\"" << svg_num(cx + box_half) << "\" y2=\"" << svg_num(y_of(stats.median))
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (double v : stats.outliers) {
      svg << "    <circle cx=\"" << svg_num(cx) << "\" cy=\"" << svg_num(y_of(v))
          << "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";
    }
    svg << "    <text x=\"" << svg_num(cx) << "\" y=\"" << svg_num(top + plot_h + 22.0)
        << "\" text-anchor=\"middle\">" << name << "</text>\n";
    svg << "  </g>\n";
  }
  svg << "</svg>\n";

  {
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + svg_path.string() + "' for writing");
    out << svg.str();
    if (!out) throw IoError("failed writing '" + svg_path.string() + "'");
  }

  nlohmann::ordered_json sidecar;
  sidecar["metric"] = std::string(metric_name);
  sidecar["suites"] = nlohmann::ordered_json::array();
  for (const auto& [name, stats] : per_suite) {
    nlohmann::ordered_json entry;
    entry["name"] = name;
    entry["n"] = stats.n;
    entry["mean"] = stats.mean;
    entry["median"] = stats.median;
    entry["q1"] = stats.q1;
    entry["q3"] = stats.q3;
    entry["iqr"] = stats.iqr;
    entry["whisker_low"] = stats.whisker_low;
    entry["whisker_high"] = stats.whisker_high;
    entry["outliers"] = stats.outliers;
    sidecar["suites"].push_back(std::move(entry));
  }
  auto sidecar_path = svg_path;
  sidecar_path.replace_extension(".json");
  std::ofstream out(sidecar_path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + sidecar_path.string() + "' for writing");
  out << sidecar.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + sidecar_path.string() + "'");
}

}  // namespace pqbench
