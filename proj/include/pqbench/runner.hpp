#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pqbench/session.hpp"

namespace pqbench {

// Worker count taken from this variable when ExecuteOptions.workers is 0.
inline constexpr const char* kWorkersEnvVar = "PQBENCH_WORKERS";

inline constexpr std::uint64_t kDefaultFileBytes = 2097152;  // 2 MiB
inline constexpr std::uint64_t kDeskFileSweepCapBytes = 67108864;   // 64 MiB
inline constexpr std::uint64_t kFullFileSweepCapBytes = 17179869184ull;  // 16 GiB

struct ScenarioSpec {
  std::string name;
  std::vector<std::string> suites;
  NetworkProfile profile;
  std::uint64_t file_bytes = kDefaultFileBytes;
  int runs = 1;
  std::uint64_t base_seed = 1;
  TransportParams transport;
  SessionOptions session;
};

struct RunResults {
  ScenarioSpec spec;
  // samples[i] belongs to spec.suites[i]; inner vectors are ordered by run
  // index. This (suite, run) order is canonical for all outputs.
  std::vector<std::vector<TimingSample>> samples;
};

// ideal (0 ms, 0%), normal (100 ms, 1.5%), congested (200 ms, 2.5%);
// 2 MiB file, 100 runs, all four suites. Throws ConfigError listing the
// valid names otherwise.
ScenarioSpec preset(std::string_view name);
const std::vector<std::string>& preset_names();

// Doubling file sizes 244*2^k up to max_bytes, congested profile.
std::vector<ScenarioSpec> sweep_file_size(std::uint64_t max_bytes = kDeskFileSweepCapBytes,
                                          int runs = 10, std::uint64_t base_seed = 1);
// One-way latency 0..400 ms in 50 ms steps at 2.5% loss.
std::vector<ScenarioSpec> sweep_latency(int runs = 10, std::uint64_t base_seed = 1);
// Loss 0..5% in 0.5 pp steps at 200 ms latency.
std::vector<ScenarioSpec> sweep_loss(int runs = 10, std::uint64_t base_seed = 1);

// Seed for run index i. Deliberately independent of suite and scenario name:
// matched run indices face identical loss sequences across suites and sweep
// points (common random numbers), which the fairness and monotonicity
// guarantees rely on.
std::uint64_t run_seed(std::uint64_t base_seed, int run_index);

struct ExecuteOptions {
  int workers = 0;  // 0: PQBENCH_WORKERS env var, else hardware concurrency
  const CryptoProvider* provider = nullptr;  // defaults to the mock provider
};

// Runs the full (suite x run) grid. Validates the spec and resolves every
// suite against the catalog before any run; checks derived run seeds for
// collisions; records failed runs as invalid samples rather than dropping
// them. Output order is canonical regardless of worker scheduling.
RunResults execute(const ScenarioSpec& spec, const std::vector<CryptoSuite>& catalog,
                   const ExecuteOptions& options = {});

}  // namespace pqbench
