#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "pqbench/metrics.hpp"

namespace fs = std::filesystem;

namespace {

// The harness exports PQBENCH_CLI pointing at the built binary.
std::string cli_path() {
  const char* env = std::getenv("PQBENCH_CLI");
  REQUIRE_MESSAGE(env != nullptr, "PQBENCH_CLI must point at the pqbench executable");
  return env;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  ++counter;
  const auto out_path =
      fs::temp_directory_path() / ("pqbench_cli_stdout_" + std::to_string(counter));
  const auto err_path =
      fs::temp_directory_path() / ("pqbench_cli_stderr_" + std::to_string(counter));
  const std::string command =
      cli_path() + " " + args + " >" + out_path.string() + " 2>" + err_path.string();
  const int raw = std::system(command.c_str());
  REQUIRE(raw != -1);
  CliResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  fs::remove(out_path);
  fs::remove(err_path);
  return result;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

std::size_t count_lines(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const auto path = fs::temp_directory_path() / name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

// Single-run-per-suite CSV carrying the congested-scenario means.
fs::path published_means_csv() {
  return write_file("pqbench_cli_published.csv",
                    std::string(pqbench::kCsvHeader) + "\n" +
                        "congested,classical,0,1,0.77,23.5496,2097152,89052.0,1\n"
                        "congested,kyber_dilithium,0,1,0.42,20.9333,2097152,100182.0,1\n"
                        "congested,kyber_falcon,0,1,0.61,18.3020,2097152,114586.0,1\n"
                        "congested,kyber_sphincs,0,1,0.64,16.8645,2097152,124352.0,1\n");
}

}  // namespace

TEST_CASE("suites subcommand prints the catalog and flight sizes") {
  const auto result = run_cli("suites");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("classical") != std::string::npos);
  CHECK(result.out.find("kyber_sphincs") != std::string::npos);
  CHECK(result.out.find("1281") != std::string::npos);   // hybrid client share
  CHECK(result.out.find("36201") != std::string::npos);  // largest server flight
  CHECK(result.out.find("37790") != std::string::npos);  // its handshake total
}

TEST_CASE("run rejects unknown scenario names with the preset list") {
  const auto result = run_cli("run nosuch");
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("ideal") != std::string::npos);
  CHECK(result.err.find("normal") != std::string::npos);
  CHECK(result.err.find("congested") != std::string::npos);
}

TEST_CASE("usage errors exit 1 and name the offending argument") {
  const auto unexpected = run_cli("report somefile.csv --quiet");
  CHECK(unexpected.exit_code == 1);
  CHECK(unexpected.err.find("--quiet") != std::string::npos);

  const auto no_subcommand = run_cli("--nosuch");
  CHECK(no_subcommand.exit_code == 1);

  const auto help = run_cli("--help");
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("suites") != std::string::npos);
}

TEST_CASE("run emits byte-identical outputs for a repeated seed") {
  const auto dir_a = fresh_dir("pqbench_cli_rerun_a");
  const auto dir_b = fresh_dir("pqbench_cli_rerun_b");
  const std::string args = "run congested --runs 2 --seed 7 --quiet --out-dir ";
  const auto first = run_cli(args + dir_a.string());
  const auto second = run_cli(args + dir_b.string());
  REQUIRE(first.exit_code == 0);
  REQUIRE(second.exit_code == 0);

  const auto csv_a = slurp(dir_a / "results.csv");
  CHECK(csv_a == slurp(dir_b / "results.csv"));
  CHECK(csv_a.rfind(std::string(pqbench::kCsvHeader) + "\n", 0) == 0);
  CHECK(count_lines(csv_a) == 1 + 4 * 2);  // header + 4 suites x 2 runs

  for (const char* name : {"handshake_box.svg", "handshake_box.json", "download_box.svg",
                           "download_box.json"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(dir_a / name));
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }

  // The summary table names the scenario and every suite.
  CHECK(first.out.find("congested") != std::string::npos);
  CHECK(first.out.find("kyber_sphincs") != std::string::npos);
}

TEST_CASE("run accepts a scenario file") {
  const auto scenario = write_file("pqbench_cli_tiny.json",
                                   R"({"name": "tiny", "runs": 1, "file_bytes": 5000,
                                       "suites": ["classical"]})");
  const auto dir = fresh_dir("pqbench_cli_tiny_out");
  const auto result =
      run_cli("run " + scenario.string() + " --quiet --out-dir " + dir.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("tiny") != std::string::npos);
  CHECK(count_lines(slurp(dir / "results.csv")) == 2);
}

TEST_CASE("run distinguishes unreadable files from invalid values") {
  const auto garbage = write_file("pqbench_cli_garbage.json", "{nope");
  CHECK(run_cli("run " + garbage.string()).exit_code == 2);

  const auto bad_field = write_file("pqbench_cli_bad_field.json", R"({"runs": 0})");
  const auto result = run_cli("run " + bad_field.string());
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("runs") != std::string::npos);
}

TEST_CASE("sweep latency writes the combined CSV and summaries") {
  const auto dir = fresh_dir("pqbench_cli_sweep_latency");
  const auto result = run_cli("sweep latency --runs 1 --seed 5 --quiet --out-dir " + dir.string());
  REQUIRE(result.exit_code == 0);

  const auto csv = slurp(dir / "sweep.csv");
  CHECK(csv.rfind(std::string(pqbench::kCsvHeader) + ",swept_value\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + 9 * 4);  // header + 9 points x 4 suites x 1 run

  const auto summaries = nlohmann::json::parse(slurp(dir / "summaries.json"));
  REQUIRE(summaries.is_array());
  REQUIRE(summaries.size() == 9);
  CHECK(summaries.at(0).at("scenario") == "latency_0ms");
  CHECK(summaries.at(8).at("scenario") == "latency_400ms");
  CHECK(summaries.at(0).at("suites").size() == 4);
}

TEST_CASE("sweep file-size respects the byte cap") {
  const auto dir = fresh_dir("pqbench_cli_sweep_fs");
  const auto result =
      run_cli("sweep file-size --max-bytes 2000 --runs 1 --quiet --out-dir " + dir.string());
  REQUIRE(result.exit_code == 0);

  const auto data = pqbench::read_csv(dir / "sweep.csv");
  REQUIRE(data.has_swept_column);
  std::vector<std::string> values;
  for (const auto& row : data.rows) {
    if (values.empty() || values.back() != row.swept_value) values.push_back(row.swept_value);
  }
  CHECK(values == std::vector<std::string>{"244", "488", "976", "1952"});
}

TEST_CASE("sweep rejects unknown kinds") {
  const auto result = run_cli("sweep banana --quiet");
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("valid kinds") != std::string::npos);
}

TEST_CASE("compare reproduces the published deltas from a CSV") {
  const auto result = run_cli("compare " + published_means_csv().string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("baseline: classical") != std::string::npos);
  CHECK(result.out.find("-45.45") != std::string::npos);
  CHECK(result.out.find("-20.78") != std::string::npos);
  CHECK(result.out.find("-16.88") != std::string::npos);
  CHECK(result.out.find("-11.11") != std::string::npos);
  CHECK(result.out.find("-22.28") != std::string::npos);
  CHECK(result.out.find("-28.39") != std::string::npos);
}

TEST_CASE("compare exit codes distinguish I/O, config, and threshold failures") {
  CHECK(run_cli("compare /nonexistent/results.csv").exit_code == 2);

  const auto malformed = write_file("pqbench_cli_malformed.csv", "suite,run\n");
  const auto bad = run_cli("compare " + malformed.string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find(":1:") != std::string::npos);

  const auto missing_baseline = run_cli("compare " + published_means_csv().string() +
                                        " --baseline rsa4096");
  CHECK(missing_baseline.exit_code == 1);
  CHECK(missing_baseline.err.find("rsa4096") != std::string::npos);

  // One candidate 25% over the baseline: reported fine by default, fatal
  // under --fail-over-threshold.
  const auto regressed = write_file("pqbench_cli_regressed.csv",
                                    std::string(pqbench::kCsvHeader) + "\n" +
                                        "s,classical,0,1,1.0,10.0,100,10.0,1\n"
                                        "s,kyber_falcon,0,1,1.25,10.0,100,10.0,1\n");
  CHECK(run_cli("compare " + regressed.string()).exit_code == 0);
  CHECK(run_cli("compare " + regressed.string() + " --fail-over-threshold").exit_code == 1);
  CHECK(run_cli("compare " + regressed.string() +
                " --fail-over-threshold --low-threshold 30 --high-threshold 40")
            .exit_code == 0);
}

TEST_CASE("report prints per-suite statistics and optional box plots") {
  const auto dir = fresh_dir("pqbench_cli_report");
  const auto result =
      run_cli("report " + published_means_csv().string() + " --out-dir " + dir.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("classical") != std::string::npos);
  CHECK(result.out.find("kyber_sphincs") != std::string::npos);
  CHECK(fs::exists(dir / "handshake_box.svg"));
  CHECK(fs::exists(dir / "download_box.svg"));
  CHECK(fs::exists(dir / "handshake_box.json"));
}
