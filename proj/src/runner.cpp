#include "pqbench/runner.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "pqbench/errors.hpp"

namespace pqbench {

namespace {

ScenarioSpec base_spec() {
  ScenarioSpec spec;
  spec.file_bytes = kDefaultFileBytes;
  spec.runs = 100;
  spec.base_seed = 1;
  for (const auto& suite : builtin_catalog()) spec.suites.push_back(suite.name);
  return spec;
}

std::string format_loss_pct(double loss_rate) {
  std::ostringstream out;
  out << loss_rate * 100.0;
  return out.str();
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"ideal", "normal", "congested"};
  return names;
}

ScenarioSpec preset(std::string_view name) {
  ScenarioSpec spec = base_spec();
  spec.name = std::string(name);
  if (name == "ideal") {
    spec.profile.one_way_latency_s = 0.0;
    spec.profile.loss_rate = 0.0;
  } else if (name == "normal") {
    spec.profile.one_way_latency_s = 0.100;
    spec.profile.loss_rate = 0.015;
  } else if (name == "congested") {
    spec.profile.one_way_latency_s = 0.200;
    spec.profile.loss_rate = 0.025;
  } else {
    std::ostringstream msg;
    msg << "unknown preset '" << name << "'; valid presets:";
    for (const auto& known : preset_names()) msg << " " << known;
    throw ConfigError(msg.str());
  }
  return spec;
}

std::vector<ScenarioSpec> sweep_file_size(std::uint64_t max_bytes, int runs,
                                          std::uint64_t base_seed) {
  if (max_bytes < 244) throw ConfigError("sweep_file_size: max_bytes must be >= 244");
  if (runs < 1) throw ConfigError("sweep_file_size: runs must be >= 1");
  std::vector<ScenarioSpec> specs;
  for (std::uint64_t size = 244; size <= max_bytes; size *= 2) {
    ScenarioSpec spec = preset("congested");
    spec.name = "file_size_" + std::to_string(size);
    spec.file_bytes = size;
    spec.runs = runs;
    spec.base_seed = base_seed;
    specs.push_back(std::move(spec));
    if (size > max_bytes / 2) break;  // next doubling would overflow the cap
  }
  return specs;
}

std::vector<ScenarioSpec> sweep_latency(int runs, std::uint64_t base_seed) {
  if (runs < 1) throw ConfigError("sweep_latency: runs must be >= 1");
  std::vector<ScenarioSpec> specs;
  for (int ms = 0; ms <= 400; ms += 50) {
    ScenarioSpec spec = base_spec();
    spec.name = "latency_" + std::to_string(ms) + "ms";
    spec.profile.one_way_latency_s = static_cast<double>(ms) / 1000.0;
    spec.profile.loss_rate = 0.025;
    spec.runs = runs;
    spec.base_seed = base_seed;
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::vector<ScenarioSpec> sweep_loss(int runs, std::uint64_t base_seed) {
  if (runs < 1) throw ConfigError("sweep_loss: runs must be >= 1");
  std::vector<ScenarioSpec> specs;
  for (int half_pct = 0; half_pct <= 10; ++half_pct) {
    const double loss_rate = static_cast<double>(half_pct) * 0.005;
    ScenarioSpec spec = base_spec();
    spec.name = "loss_" + format_loss_pct(loss_rate) + "pct";
    spec.profile.one_way_latency_s = 0.200;
    spec.profile.loss_rate = loss_rate;
    spec.runs = runs;
    spec.base_seed = base_seed;
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::uint64_t run_seed(std::uint64_t base_seed, int run_index) {
  return combine_seed(base_seed, 0x52554E00ull + static_cast<std::uint64_t>(run_index));
}

namespace {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnvVar)) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

}  // namespace

RunResults execute(const ScenarioSpec& spec, const std::vector<CryptoSuite>& catalog,
                   const ExecuteOptions& options) {
  if (spec.runs < 1) throw ConfigError("scenario '" + spec.name + "': runs must be >= 1");
  if (spec.suites.empty()) throw ConfigError("scenario '" + spec.name + "': no suites listed");
  try {
    validate(spec.profile);
    validate(spec.transport);
  } catch (const std::invalid_argument& err) {
    throw ConfigError("scenario '" + spec.name + "': " + err.what());
  }

  // Resolve everything up front so a bad name fails before any run.
  std::vector<const CryptoSuite*> suites;
  suites.reserve(spec.suites.size());
  for (const auto& name : spec.suites) suites.push_back(&find_suite(catalog, name));

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(spec.runs));
  std::unordered_set<std::uint64_t> seen;
  for (int i = 0; i < spec.runs; ++i) {
    seeds[static_cast<std::size_t>(i)] = run_seed(spec.base_seed, i);
    if (!seen.insert(seeds[static_cast<std::size_t>(i)]).second) {
      throw ConfigError("scenario '" + spec.name + "': derived run seeds collide at run " +
                        std::to_string(i));
    }
  }

  const CryptoProvider& provider = options.provider ? *options.provider : mock_provider();

  RunResults results;
  results.spec = spec;
  results.samples.assign(suites.size(), {});
  for (auto& per_suite : results.samples) {
    per_suite.assign(static_cast<std::size_t>(spec.runs), TimingSample{});
  }

  const std::size_t task_count = suites.size() * static_cast<std::size_t>(spec.runs);
  const int workers =
      static_cast<int>(std::min<std::size_t>(task_count,
                                             static_cast<std::size_t>(resolve_workers(options.workers))));

  std::atomic<std::size_t> cursor{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  const auto work = [&] {
    for (;;) {
      const std::size_t task = cursor.fetch_add(1);
      if (task >= task_count) return;
      const std::size_t suite_index = task / static_cast<std::size_t>(spec.runs);
      const std::size_t run_index = task % static_cast<std::size_t>(spec.runs);
      try {
        results.samples[suite_index][run_index] =
            run_session(*suites[suite_index], spec.profile, spec.file_bytes, spec.transport,
                        seeds[run_index], spec.session, provider);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        cursor.store(task_count);
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& thread : pool) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  return results;
}

}  // namespace pqbench
