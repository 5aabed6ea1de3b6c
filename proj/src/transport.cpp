#include "pqbench/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace pqbench {

void validate(const TransportParams& params) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("TransportParams.") + what);
  };
  require(params.initial_cwnd_segments >= 1, "initial_cwnd_segments must be >= 1");
  require(params.cwnd_cap_segments >= 1, "cwnd_cap_segments must be >= 1");
  require(params.rto_initial_s > 0.0, "rto_initial_s must be > 0");
  require(params.rto_min_s > 0.0, "rto_min_s must be > 0");
  require(params.rto_max_s > 0.0, "rto_max_s must be > 0");
  require(params.rto_backoff_factor > 0.0, "rto_backoff_factor must be > 0");
  require(params.max_retries >= 1, "max_retries must be >= 1");
  require(params.ack_bytes > 0, "ack_bytes must be > 0");
  require(params.delayed_ack_timeout_s > 0.0, "delayed_ack_timeout_s must be > 0");
}

double rto_for_attempt(const TransportParams& params, double srtt_s, int attempt) {
  if (attempt < 0) throw std::invalid_argument("attempt must be >= 0");
  const double base = std::max(params.rto_min_s, 2.0 * srtt_s);
  const double backed_off = base * std::pow(params.rto_backoff_factor, attempt);
  return std::min(params.rto_max_s, backed_off);
}

namespace {

struct SegmentFlight {
  double send_time_s = 0.0;
  double arrival_time_s = 0.0;
  bool delivered = false;
};

}  // namespace

TransferTrace deliver_stream(std::uint64_t payload_bytes, double start_time_s,
                             const NetworkProfile& profile, const TransportParams& params,
                             DeterministicRng& rng) {
  validate(profile);
  validate(params);

  const std::uint64_t per_segment = profile.payload_per_segment_bytes();
  const std::uint64_t total_segments = segment_count(payload_bytes, profile);

  TransferTrace trace;
  trace.completion_time_s = start_time_s;
  trace.receiver_done_time_s = start_time_s;
  if (total_segments == 0) return trace;

  const auto segment_payload = [&](std::uint64_t idx) {
    return idx + 1 == total_segments ? payload_bytes - per_segment * (total_segments - 1)
                                     : per_segment;
  };
  const auto segment_wire = [&](std::uint64_t idx) {
    return segment_payload(idx) + kSegmentHeaderBytes;
  };
  const auto delivered_bytes = [&](std::uint64_t in_order_segments) {
    return in_order_segments == total_segments ? payload_bytes : in_order_segments * per_segment;
  };

  std::vector<std::uint32_t> attempts(total_segments, 0);
  const std::uint64_t cwnd_cap = static_cast<std::uint64_t>(params.cwnd_cap_segments);
  std::uint64_t cwnd =
      std::min<std::uint64_t>(static_cast<std::uint64_t>(params.initial_cwnd_segments), cwnd_cap);
  std::uint64_t next_unacked = 0;   // sender's first unacknowledged segment
  std::uint64_t receiver_next = 0;  // receiver's next in-order segment
  double now = start_time_s;
  double srtt = -1.0;  // unset until the first unretransmitted exchange

  std::vector<SegmentFlight> burst;
  const double ack_serialization = serialization_s(params.ack_bytes, profile);

  while (next_unacked < total_segments) {
    const std::uint64_t base = next_unacked;
    const std::uint64_t window = std::min(cwnd, total_segments - base);

    // Data burst, back to back on the forward link.
    burst.assign(window, SegmentFlight{});
    double send_clock = now;
    for (std::uint64_t i = 0; i < window; ++i) {
      const std::uint64_t idx = base + i;
      if (attempts[idx] > static_cast<std::uint32_t>(params.max_retries)) {
        trace.completion_time_s = now;
        trace.retransmissions = trace.segments_sent - std::min(trace.segments_sent, total_segments);
        trace.bytes_delivered = delivered_bytes(receiver_next);
        std::ostringstream msg;
        msg << "segment " << idx << " exceeded max_retries=" << params.max_retries;
        throw TransferFailedError(msg.str(), trace);
      }
      attempts[idx] += 1;
      trace.segments_sent += 1;
      const auto outcome = transmit(segment_wire(idx), send_clock, profile, rng);
      burst[i].send_time_s = send_clock;
      burst[i].arrival_time_s = outcome.arrival_time_s;
      burst[i].delivered = outcome.delivered;
      send_clock += serialization_s(segment_wire(idx), profile);
    }

    // Receiver walk in arrival order (equal to send order on this link),
    // cumulative ACKs back across the reverse link.
    std::uint64_t max_acked = next_unacked;
    double progress_ack_arrival = -1.0;  // arrival of the ACK that last advanced max_acked
    double first_cover_arrival = -1.0;   // arrival of the first ACK covering segment `base`
    double reverse_link_free = 0.0;
    bool ack_held = false;
    double held_since = 0.0;

    const auto send_ack = [&](std::uint64_t value, double at) {
      const double reverse_send = std::max(at, reverse_link_free);
      reverse_link_free = reverse_send + ack_serialization;
      if (params.lossy_acks && rng.next_unit() < profile.loss_rate) return;
      const double arrival = reverse_send + ack_serialization + profile.one_way_latency_s;
      if (first_cover_arrival < 0.0 && value > base) first_cover_arrival = arrival;
      if (value > max_acked) {
        max_acked = value;
        progress_ack_arrival = arrival;
      }
    };

    for (std::uint64_t i = 0; i < window; ++i) {
      if (!burst[i].delivered) continue;
      const std::uint64_t idx = base + i;
      bool fresh = false;
      if (idx == receiver_next) {
        receiver_next += 1;
        fresh = true;
        if (receiver_next == total_segments) {
          trace.receiver_done_time_s = burst[i].arrival_time_s;
        }
      }
      // Out-of-order segments are discarded (go-back-N receiver), duplicates
      // ignored; both still trigger an immediate cumulative ACK.
      if (params.delayed_ack && fresh && receiver_next < total_segments && !ack_held &&
          i + 1 < window) {
        ack_held = true;
        held_since = burst[i].arrival_time_s;
        continue;
      }
      ack_held = false;
      send_ack(receiver_next, burst[i].arrival_time_s);
    }
    if (ack_held) {
      send_ack(receiver_next, held_since + params.delayed_ack_timeout_s);
    }

    // One RTT sample per round, from the round's first segment when it was
    // not a retransmission (Karn's rule) and an ACK covered it.
    if (attempts[base] == 1 && first_cover_arrival >= 0.0) {
      const double sample = first_cover_arrival - burst[0].send_time_s;
      srtt = srtt < 0.0 ? sample : srtt + (sample - srtt) / 8.0;
    }

    next_unacked = max_acked;
    if (max_acked == base + window) {
      // Fully acknowledged round: grow the window, advance to the ACK that
      // completed it.
      cwnd = std::min(cwnd * 2, cwnd_cap);
      now = progress_ack_arrival;
    } else {
      // Timeout on the first unacknowledged segment; retransmission resumes
      // from it with a halved window.
      const std::uint64_t gap = next_unacked;
      const double timer_base = srtt >= 0.0 ? std::max(params.rto_min_s, 2.0 * srtt)
                                            : params.rto_initial_s;
      const int backoff_exponent = static_cast<int>(attempts[gap]) - 1;
      const double rto = std::min(params.rto_max_s,
                                  timer_base * std::pow(params.rto_backoff_factor,
                                                        backoff_exponent));
      double resume = burst[gap - base].send_time_s + rto;
      // A straggler ACK may have carried the partial progress after the
      // timer fired; never start the next round before the news arrived.
      if (progress_ack_arrival > resume) resume = progress_ack_arrival;
      cwnd = std::max<std::uint64_t>(cwnd / 2, 1);
      now = resume;
    }
  }

  trace.completion_time_s = now;
  trace.retransmissions = trace.segments_sent - total_segments;
  trace.bytes_delivered = payload_bytes;
  return trace;
}

}  // namespace pqbench
