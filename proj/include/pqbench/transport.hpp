#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "pqbench/netlink.hpp"
#include "pqbench/rng.hpp"

namespace pqbench {

// Reliable in-order byte stream over the lossy link. Deliberately simple:
// go-back-N with cumulative ACKs, a round-based AIMD window (double per
// fully-ACKed round up to the cap, halve with floor 1 on a timeout), and a
// per-segment retransmission timer with exponential backoff. No SACK, no
// fast retransmit, no delayed-ack timer games beyond the flag below.
struct TransportParams {
  int initial_cwnd_segments = 10;
  int cwnd_cap_segments = 64;
  double rto_initial_s = 1.0;       // timer base before the first RTT sample
  double rto_min_s = 0.2;
  double rto_max_s = 60.0;          // backoff cap
  double rto_backoff_factor = 2.0;
  int max_retries = 15;             // per segment, beyond this the transfer fails
  std::uint64_t ack_bytes = 40;     // cumulative ACK cost on the reverse path
  bool delayed_ack = false;         // ack every second in-order segment
  double delayed_ack_timeout_s = 0.2;
  // By default only data segments face loss. With lossy_acks the reverse path
  // draws against the same loss rate (expected sends per stop-and-wait segment
  // become 1/(1-p)^2 instead of 1/(1-p)).
  bool lossy_acks = false;
};

// Throws std::invalid_argument naming the offending field.
void validate(const TransportParams& params);

struct TransferTrace {
  double completion_time_s = 0.0;     // absolute: last payload byte's ACK reaches the sender
  double receiver_done_time_s = 0.0;  // absolute: receiver holds the full payload
  std::uint64_t segments_sent = 0;    // including retransmissions
  std::uint64_t retransmissions = 0;  // segments_sent minus the minimal segment count
  std::uint64_t bytes_delivered = 0;  // in-order payload bytes at the receiver
};

class TransferFailedError : public std::runtime_error {
 public:
  TransferFailedError(const std::string& msg, TransferTrace partial_trace)
      : std::runtime_error(msg), partial(partial_trace) {}
  TransferTrace partial;
};

// Retransmission timer for a segment about to wait out its (attempt+1)-th
// transmission: max(rto_min_s, 2*srtt_s) * rto_backoff_factor^attempt,
// capped at rto_max_s. attempt 0 is the first transmission.
double rto_for_attempt(const TransportParams& params, double srtt_s, int attempt);

// Ships payload_bytes starting at start_time_s. Throws TransferFailedError
// (carrying the partial trace) when any segment exhausts max_retries.
// With loss_rate 0 the result matches the closed-form window-growth schedule.
TransferTrace deliver_stream(std::uint64_t payload_bytes, double start_time_s,
                             const NetworkProfile& profile, const TransportParams& params,
                             DeterministicRng& rng);

}  // namespace pqbench
