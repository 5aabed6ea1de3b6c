#include "pqbench/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "pqbench/errors.hpp"

#include "json.hpp"

namespace pqbench {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    // err.what() carries line/byte position diagnostics.
    throw IoError(path.string() + ": " + err.what());
  }
}

[[noreturn]] void field_fail(const std::filesystem::path& path, const std::string& field,
                             const std::string& what) {
  throw ConfigError(path.string() + ": field '" + field + "': " + what);
}

double require_number(const json& value, const std::filesystem::path& path,
                      const std::string& field) {
  if (!value.is_number()) field_fail(path, field, "expected a number");
  return value.get<double>();
}

std::uint64_t require_uint(const json& value, const std::filesystem::path& path,
                           const std::string& field) {
  if (!value.is_number_unsigned()) field_fail(path, field, "expected a non-negative integer");
  return value.get<std::uint64_t>();
}

bool require_bool(const json& value, const std::filesystem::path& path,
                  const std::string& field) {
  if (!value.is_boolean()) field_fail(path, field, "expected true or false");
  return value.get<bool>();
}

}  // namespace

ScenarioSpec load_scenario(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  if (!doc.is_object()) throw ConfigError(path.string() + ": top level must be an object");

  static const char* known_keys[] = {
      "name",          "preset",       "latency_ms",   "latency_is_rtt", "loss_pct",
      "loss_rate",     "bandwidth_Bps", "mtu_bytes",   "file_bytes",     "runs",
      "base_seed",     "suites",       "transport",    "session",
  };
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* k : known_keys) {
      if (key == k) known = true;
    }
    if (!known) field_fail(path, key, "unknown field");
  }

  ScenarioSpec spec;
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) field_fail(path, "preset", "expected a preset name string");
    spec = preset(doc["preset"].get<std::string>());
  } else {
    // Neutral defaults when no preset seeds the spec: ideal link, desk-scale runs.
    spec.name = path.stem().string();
    spec.runs = 10;
    for (const auto& suite : builtin_catalog()) spec.suites.push_back(suite.name);
  }

  if (doc.contains("name")) {
    if (!doc["name"].is_string() || doc["name"].get<std::string>().empty()) {
      field_fail(path, "name", "expected a non-empty string");
    }
    spec.name = doc["name"].get<std::string>();
  }

  if (doc.contains("latency_ms")) {
    const double ms = require_number(doc["latency_ms"], path, "latency_ms");
    if (ms < 0.0) field_fail(path, "latency_ms", "must be >= 0");
    spec.profile.one_way_latency_s = ms / 1000.0;
  }
  if (doc.contains("latency_is_rtt") && require_bool(doc["latency_is_rtt"], path, "latency_is_rtt")) {
    // The configured latency was a round-trip figure; the model wants one-way.
    spec.profile.one_way_latency_s /= 2.0;
  }

  if (doc.contains("loss_pct") && doc.contains("loss_rate")) {
    field_fail(path, "loss_rate", "give either loss_pct or loss_rate, not both");
  }
  if (doc.contains("loss_pct")) {
    const double pct = require_number(doc["loss_pct"], path, "loss_pct");
    if (!(pct >= 0.0 && pct < 100.0)) {
      field_fail(path, "loss_pct", "outside the valid range [0,100)");
    }
    spec.profile.loss_rate = pct / 100.0;
  }
  if (doc.contains("loss_rate")) {
    const double rate = require_number(doc["loss_rate"], path, "loss_rate");
    if (!(rate >= 0.0 && rate < 1.0)) {
      std::ostringstream msg;
      msg << "value " << rate << " outside the valid range [0,1)";
      field_fail(path, "loss_rate", msg.str());
    }
    spec.profile.loss_rate = rate;
  }

  if (doc.contains("bandwidth_Bps")) {
    const double bw = require_number(doc["bandwidth_Bps"], path, "bandwidth_Bps");
    if (!(bw > 0.0)) field_fail(path, "bandwidth_Bps", "must be > 0 (omit for unlimited)");
    spec.profile.bandwidth_Bps = bw;
  }
  if (doc.contains("mtu_bytes")) {
    const std::uint64_t mtu = require_uint(doc["mtu_bytes"], path, "mtu_bytes");
    if (mtu <= kSegmentHeaderBytes) field_fail(path, "mtu_bytes", "must exceed the 40-byte header");
    spec.profile.mtu_bytes = mtu;
  }
  if (doc.contains("file_bytes")) {
    spec.file_bytes = require_uint(doc["file_bytes"], path, "file_bytes");
  }
  if (doc.contains("runs")) {
    const std::uint64_t runs = require_uint(doc["runs"], path, "runs");
    if (runs < 1 || runs > 1000000) field_fail(path, "runs", "must be in [1, 1000000]");
    spec.runs = static_cast<int>(runs);
  }
  if (doc.contains("base_seed")) {
    spec.base_seed = require_uint(doc["base_seed"], path, "base_seed");
  }
  if (doc.contains("suites")) {
    if (!doc["suites"].is_array() || doc["suites"].empty()) {
      field_fail(path, "suites", "expected a non-empty array of suite names");
    }
    spec.suites.clear();
    for (const auto& entry : doc["suites"]) {
      if (!entry.is_string()) field_fail(path, "suites", "entries must be strings");
      spec.suites.push_back(entry.get<std::string>());
    }
  }

  if (doc.contains("transport")) {
    const json& t = doc["transport"];
    if (!t.is_object()) field_fail(path, "transport", "expected an object");
    for (const auto& [key, value] : t.items()) {
      const std::string field = "transport." + key;
      if (key == "initial_cwnd_segments") {
        spec.transport.initial_cwnd_segments =
            static_cast<int>(require_uint(value, path, field));
      } else if (key == "cwnd_cap_segments") {
        spec.transport.cwnd_cap_segments = static_cast<int>(require_uint(value, path, field));
      } else if (key == "rto_initial_s") {
        spec.transport.rto_initial_s = require_number(value, path, field);
      } else if (key == "rto_min_s") {
        spec.transport.rto_min_s = require_number(value, path, field);
      } else if (key == "rto_max_s") {
        spec.transport.rto_max_s = require_number(value, path, field);
      } else if (key == "rto_backoff_factor") {
        spec.transport.rto_backoff_factor = require_number(value, path, field);
      } else if (key == "max_retries") {
        spec.transport.max_retries = static_cast<int>(require_uint(value, path, field));
      } else if (key == "ack_bytes") {
        spec.transport.ack_bytes = require_uint(value, path, field);
      } else if (key == "delayed_ack") {
        spec.transport.delayed_ack = require_bool(value, path, field);
      } else if (key == "delayed_ack_timeout_s") {
        spec.transport.delayed_ack_timeout_s = require_number(value, path, field);
      } else if (key == "lossy_acks") {
        spec.transport.lossy_acks = require_bool(value, path, field);
      } else {
        field_fail(path, field, "unknown transport field");
      }
    }
  }

  if (doc.contains("session")) {
    const json& s = doc["session"];
    if (!s.is_object()) field_fail(path, "session", "expected an object");
    for (const auto& [key, value] : s.items()) {
      const std::string field = "session." + key;
      if (key == "piggyback_handshake_acks") {
        spec.session.piggyback_handshake_acks = require_bool(value, path, field);
      } else if (key == "request_bytes") {
        spec.session.request_bytes = require_uint(value, path, field);
      } else if (key == "record_overhead_fraction") {
        const double fraction = require_number(value, path, field);
        if (!(fraction >= 0.0 && fraction < 1.0)) field_fail(path, field, "must be in [0,1)");
        spec.session.record_overhead_fraction = fraction;
      } else if (key == "charge_connect_rtt") {
        spec.session.charge_connect_rtt = require_bool(value, path, field);
      } else {
        field_fail(path, field, "unknown session field");
      }
    }
  }

  try {
    validate(spec.profile);
    validate(spec.transport);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(path.string() + ": " + err.what());
  }
  return spec;
}

void apply_suite_overrides(std::vector<CryptoSuite>& catalog,
                           const std::filesystem::path& path) {
  const json doc = parse_file(path);
  if (!doc.is_object()) throw ConfigError(path.string() + ": top level must be an object");

  for (const auto& [suite_name, overrides] : doc.items()) {
    CryptoSuite* target = nullptr;
    for (auto& suite : catalog) {
      if (suite.name == suite_name) target = &suite;
    }
    if (target == nullptr) {
      std::ostringstream msg;
      msg << path.string() << ": unknown suite '" << suite_name << "'; known suites:";
      for (const auto& suite : catalog) msg << " " << suite.name;
      throw ConfigError(msg.str());
    }
    if (!overrides.is_object()) field_fail(path, suite_name, "expected an object of overrides");

    for (const auto& [key, value] : overrides.items()) {
      const std::string field = suite_name + "." + key;
      if (key == "client_share_bytes") {
        target->kem.client_share_bytes = require_uint(value, path, field);
      } else if (key == "server_share_bytes") {
        target->kem.server_share_bytes = require_uint(value, path, field);
      } else if (key == "public_key_bytes") {
        target->sig.public_key_bytes = require_uint(value, path, field);
      } else if (key == "signature_bytes") {
        target->sig.signature_bytes = require_uint(value, path, field);
      } else if (key == "cert_overhead_bytes") {
        target->cert_overhead_bytes = require_uint(value, path, field);
      } else if (key == "keygen_s") {
        target->cost.keygen_s = require_number(value, path, field);
      } else if (key == "encap_s") {
        target->cost.encap_s = require_number(value, path, field);
      } else if (key == "decap_s") {
        target->cost.decap_s = require_number(value, path, field);
      } else if (key == "sign_s") {
        target->cost.sign_s = require_number(value, path, field);
      } else if (key == "verify_s") {
        target->cost.verify_s = require_number(value, path, field);
      } else {
        field_fail(path, field, "unknown override key");
      }
    }
    try {
      validate(*target);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(path.string() + ": " + err.what());
    }
  }
}

}  // namespace pqbench
