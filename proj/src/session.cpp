#include "pqbench/session.hpp"

#include <cmath>

namespace pqbench {

namespace {

// Flight positions key the per-flight loss streams; provider seeds get a
// disjoint tag space plus the suite name, so blob content never perturbs
// the loss sequences shared across suites.
enum FlightTag : std::uint64_t {
  kClientHelloTag = 0,
  kServerFlightTag = 1,
  kClientFinishedTag = 2,
  kRequestTag = 3,
  kDownloadTag = 4,
  kProviderTagBase = 32,
};

std::uint64_t provider_seed(const DeterministicRng& rng, const CryptoSuite& suite,
                            std::uint64_t op_index) {
  return combine_seed(rng.fork(kProviderTagBase + op_index).seed(), fnv1a64(suite.name));
}

}  // namespace

HandshakeTrace run_handshake(const CryptoSuite& suite, const NetworkProfile& profile,
                             const TransportParams& params, DeterministicRng& rng,
                             const SessionOptions& options, double start_time_s,
                             const CryptoProvider& provider) {
  validate(suite);
  validate(profile);
  validate(params);

  const FlightSizes sizes = flight_sizes(suite, options.overheads);
  HandshakeTrace trace;
  double t = start_time_s;

  const auto charge = [&](CryptoOp kind, std::uint64_t op_index) {
    const auto result = provider.op(kind, suite, provider_seed(rng, suite, op_index));
    trace.crypto_time_s += result.cost_s;
    t += result.cost_s;
  };
  const auto fly = [&](int flight, std::uint64_t bytes, std::uint64_t tag, bool final_flight) {
    DeterministicRng flight_rng = rng.fork(tag);
    try {
      trace.flights[flight] = deliver_stream(bytes, t, profile, params, flight_rng);
    } catch (const TransferFailedError& err) {
      throw HandshakeFailedError(
          "handshake flight " + std::to_string(flight) + " failed: " + err.what(), flight,
          err.partial);
    }
    // With piggybacked ACKs the reverse-direction response carries the
    // transport acknowledgment, so the clock advances as soon as the peer
    // holds the flight. The final flight always waits for its own ACK.
    if (options.piggyback_handshake_acks && !final_flight) {
      t = trace.flights[flight].receiver_done_time_s;
    } else {
      t = trace.flights[flight].completion_time_s;
    }
  };

  charge(CryptoOp::keygen, 0);  // client ephemeral share
  fly(0, sizes.client_hello, kClientHelloTag, false);
  charge(CryptoOp::encap, 1);   // server encapsulates against the client share
  charge(CryptoOp::sign, 2);    // CertificateVerify
  charge(CryptoOp::keygen, 3);  // server's own share generation
  fly(1, sizes.server_flight, kServerFlightTag, false);
  charge(CryptoOp::decap, 4);
  charge(CryptoOp::verify, 5);  // certificate issuer signature
  charge(CryptoOp::verify, 6);  // CertificateVerify
  fly(2, sizes.client_finished, kClientFinishedTag, true);

  trace.handshake_time_s = t - start_time_s;
  return trace;
}

TimingSample run_session(const CryptoSuite& suite, const NetworkProfile& profile,
                         std::uint64_t file_bytes, const TransportParams& params,
                         std::uint64_t seed, const SessionOptions& options,
                         const CryptoProvider& provider) {
  DeterministicRng rng(seed);

  TimingSample sample;
  sample.suite_name = suite.name;
  sample.file_bytes = file_bytes;
  sample.seed = seed;

  double t = 0.0;
  if (options.charge_connect_rtt) t += 2.0 * profile.one_way_latency_s;
  const double measured_start = t;

  try {
    const HandshakeTrace handshake =
        run_handshake(suite, profile, params, rng, options, t, provider);
    sample.handshake_time_s = handshake.handshake_time_s;
    t += handshake.handshake_time_s;

    DeterministicRng request_rng = rng.fork(kRequestTag);
    t = deliver_stream(options.request_bytes, t, profile, params, request_rng).completion_time_s;

    const auto overhead = static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(file_bytes) * options.record_overhead_fraction));
    DeterministicRng download_rng = rng.fork(kDownloadTag);
    t = deliver_stream(file_bytes + overhead, t, profile, params, download_rng).completion_time_s;
  } catch (const HandshakeFailedError& err) {
    sample.valid = false;
    sample.handshake_time_s = err.partial.completion_time_s - measured_start;
    sample.total_download_time_s = sample.handshake_time_s;
    return sample;
  } catch (const TransferFailedError& err) {
    sample.valid = false;
    sample.total_download_time_s = err.partial.completion_time_s - measured_start;
    return sample;
  }

  sample.total_download_time_s = t - measured_start;
  sample.transfer_rate_Bps =
      sample.total_download_time_s > 0.0
          ? static_cast<double>(file_bytes) / sample.total_download_time_s
          : 0.0;
  return sample;
}

}  // namespace pqbench
