#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "pqbench/suites.hpp"
#include "pqbench/transport.hpp"

namespace pqbench {

struct SessionOptions {
  // When true a flight's final ACK rides the next reverse-direction flight,
  // so the loss-free handshake costs 2 RTT end to end; when false every
  // flight waits for its own ACK (3 RTT loss-free).
  bool piggyback_handshake_acks = true;
  std::uint64_t request_bytes = 512;        // GET-like request after the handshake
  double record_overhead_fraction = 0.01;   // per-record framing on the download
  // SYN-like connect exchange charged as one silent RTT before the handshake
  // clock starts; excluded from both reported times, consumes no loss draws.
  bool charge_connect_rtt = true;
  WireOverheads overheads;
};

struct HandshakeTrace {
  double handshake_time_s = 0.0;  // first ClientHello byte to final flight ACK
  double crypto_time_s = 0.0;     // sum of CostModel charges, never overlapped with network
  std::array<TransferTrace, 3> flights;  // ClientHello, ServerFlight, ClientFinished
};

class HandshakeFailedError : public std::runtime_error {
 public:
  HandshakeFailedError(const std::string& msg, int flight, TransferTrace partial_trace)
      : std::runtime_error(msg), flight_index(flight), partial(partial_trace) {}
  int flight_index;
  TransferTrace partial;
};

// One measured run of one suite under one profile.
struct TimingSample {
  std::string suite_name;
  double handshake_time_s = 0.0;
  double total_download_time_s = 0.0;  // handshake + request + payload download
  std::uint64_t file_bytes = 0;
  double transfer_rate_Bps = 0.0;      // file_bytes / total_download_time_s, 0 when total is 0
  std::uint64_t seed = 0;
  bool valid = true;                   // false when the transport gave up mid-run
};

// Simulates the three-flight handshake. Per-flight loss streams are forked
// from rng by flight position (tags 0..2) so equal seeds face equal loss
// sequences regardless of the suite. Crypto costs are charged serially:
// client keygen, server encap+sign+keygen, client decap + two verifies.
// Throws HandshakeFailedError when a flight exhausts its retries.
HandshakeTrace run_handshake(const CryptoSuite& suite, const NetworkProfile& profile,
                             const TransportParams& params, DeterministicRng& rng,
                             const SessionOptions& options = {}, double start_time_s = 0.0,
                             const CryptoProvider& provider = mock_provider());

// Full session: connect, handshake, request flight, file download (with
// record overhead). Never throws on transport failure; the sample comes back
// with valid = false and the times accumulated up to the failure.
TimingSample run_session(const CryptoSuite& suite, const NetworkProfile& profile,
                         std::uint64_t file_bytes, const TransportParams& params,
                         std::uint64_t seed, const SessionOptions& options = {},
                         const CryptoProvider& provider = mock_provider());

}  // namespace pqbench
