#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqbench {

// Certificate body bytes around the embedded public key and issuer signature
// (subject, extensions, encoding). Single self-signed certificate model.
inline constexpr std::uint64_t kDefaultCertOverheadBytes = 500;

struct KemParams {
  std::string name;
  std::uint64_t client_share_bytes = 0;   // key-share extension payload in ClientHello
  std::uint64_t server_share_bytes = 0;   // key-share / ciphertext in ServerHello
  std::uint64_t shared_secret_bytes = 0;
};

struct SigParams {
  std::string name;
  std::uint64_t public_key_bytes = 0;
  std::uint64_t signature_bytes = 0;
};

// Per-operation compute charges in seconds. All zero by default so timing
// differences come from wire sizes alone; a calibration/override file can
// assign measured costs.
struct CostModel {
  double keygen_s = 0.0;
  double encap_s = 0.0;
  double decap_s = 0.0;
  double sign_s = 0.0;
  double verify_s = 0.0;
};

struct CryptoSuite {
  std::string name;
  KemParams kem;
  SigParams sig;
  CostModel cost;
  std::uint64_t cert_overhead_bytes = kDefaultCertOverheadBytes;
};

// Fixed handshake message framing, independent of the suite.
struct WireOverheads {
  std::uint64_t hello_overhead_bytes = 256;  // hello body minus the key share
  std::uint64_t finished_bytes = 52;         // Finished message incl. framing
};

// Byte sizes of the three handshake flights.
struct FlightSizes {
  std::uint64_t client_hello = 0;
  std::uint64_t server_hello = 0;        // part of server_flight
  std::uint64_t certificate = 0;         // cert overhead + sig public key + issuer signature
  std::uint64_t certificate_verify = 0;  // one more signature
  std::uint64_t server_finished = 0;     // part of server_flight
  std::uint64_t server_flight = 0;       // server_hello + certificate + certificate_verify + server_finished
  std::uint64_t client_finished = 0;

  std::uint64_t total() const { return client_hello + server_flight + client_finished; }
};

// Throws std::invalid_argument when sizes that must be positive are not.
void validate(const CryptoSuite& suite);

// The four benchmarked suites: one classical baseline and three hybrid
// post-quantum suites sharing a P-384+Kyber768 key exchange and differing
// in the signature scheme. Sizes carry provenance comments in the source.
// Returns an immutable singleton; copy it before applying overrides.
const std::vector<CryptoSuite>& builtin_catalog();

// Throws ConfigError listing the known names when absent.
const CryptoSuite& find_suite(const std::vector<CryptoSuite>& catalog, std::string_view name);

FlightSizes flight_sizes(const CryptoSuite& suite, const WireOverheads& overheads = {});

enum class CryptoOp { keygen, encap, decap, sign, verify };

// Throws std::invalid_argument naming the valid kinds.
CryptoOp crypto_op_from_name(std::string_view name);
std::string_view to_string(CryptoOp op);

struct CryptoOpResult {
  std::vector<std::uint8_t> blob;  // sized exactly as the suite declares for the op
  double cost_s = 0.0;             // charge from the suite's CostModel
  bool accepted = true;            // verify only: input matched the sign blob
};

class CryptoProvider {
 public:
  virtual ~CryptoProvider() = default;
  // Blob content must be a pure function of (kind, suite.name, seed).
  virtual CryptoOpResult op(CryptoOp kind, const CryptoSuite& suite, std::uint64_t seed,
                            std::span<const std::uint8_t> input = {}) const = 0;
};

// Deterministic stand-in used by the whole benchmark: no real cryptography,
// only correctly sized blobs and CostModel charges. verify accepts exactly
// the blob sign produces for the same (suite, seed) and rejects all others.
class MockCryptoProvider final : public CryptoProvider {
 public:
  CryptoOpResult op(CryptoOp kind, const CryptoSuite& suite, std::uint64_t seed,
                    std::span<const std::uint8_t> input = {}) const override;
};

// Shared immutable instance.
const CryptoProvider& mock_provider();

}  // namespace pqbench
