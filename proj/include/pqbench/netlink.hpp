#pragma once

#include <cstdint>
#include <limits>

#include "pqbench/rng.hpp"

namespace pqbench {

// Fixed per-segment header charge (IP + TCP without options).
inline constexpr std::uint64_t kSegmentHeaderBytes = 40;

inline constexpr double kUnlimitedBandwidth = std::numeric_limits<double>::infinity();

// One-way impairment model: constant propagation latency, i.i.d. per-packet
// loss, optional serialization delay. No jitter, no reordering, no duplication.
struct NetworkProfile {
  double one_way_latency_s = 0.0;
  double loss_rate = 0.0;                     // probability in [0, 1)
  double bandwidth_Bps = kUnlimitedBandwidth; // bytes per second, > 0
  std::uint64_t mtu_bytes = 1500;

  std::uint64_t payload_per_segment_bytes() const { return mtu_bytes - kSegmentHeaderBytes; }
};

// Throws std::invalid_argument naming the offending field and valid range.
void validate(const NetworkProfile& profile);

inline bool is_unlimited(double bandwidth_Bps) {
  return bandwidth_Bps == kUnlimitedBandwidth;
}

// Serialization delay for one packet; zero on an unlimited link.
double serialization_s(std::uint64_t size_bytes, const NetworkProfile& profile);

struct DeliveryOutcome {
  bool delivered = false;
  double arrival_time_s = 0.0;  // meaningful only when delivered
};

// Sends one packet. Consumes exactly one rng draw per call, delivered or not,
// so loss sequences stay aligned across configurations. Packets larger than
// the MTU are a contract violation (segmentation is the transport's job).
DeliveryOutcome transmit(std::uint64_t size_bytes, double send_time_s,
                         const NetworkProfile& profile, DeterministicRng& rng);

// Segments needed for a payload: 0 for 0 bytes, else ceil(payload / payload_per_segment).
std::uint64_t segment_count(std::uint64_t payload_bytes, const NetworkProfile& profile);

}  // namespace pqbench
