#pragma once

#include <filesystem>
#include <vector>

#include "pqbench/runner.hpp"
#include "pqbench/suites.hpp"

namespace pqbench {

// Loads a JSON scenario file. An optional "preset" field seeds the spec,
// explicit fields override it. Validation failures raise ConfigError naming
// the field and its valid range; unreadable or unparsable files raise IoError
// with position diagnostics. Schema documented in the README and mirrored by
// scenarios/example_scenario.json.
ScenarioSpec load_scenario(const std::filesystem::path& path);

// Applies a JSON suite-override file to the catalog in place. Top-level keys
// are suite names; per-suite keys are any subset of {client_share_bytes,
// server_share_bytes, public_key_bytes, signature_bytes, cert_overhead_bytes,
// keygen_s, encap_s, decap_s, sign_s, verify_s}. Everything else inherits the
// catalog value. Unknown suites or keys raise ConfigError.
void apply_suite_overrides(std::vector<CryptoSuite>& catalog,
                           const std::filesystem::path& path);

}  // namespace pqbench
