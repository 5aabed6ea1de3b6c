#include "pqbench/netlink.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pqbench {

void validate(const NetworkProfile& profile) {
  if (!(profile.one_way_latency_s >= 0.0) || std::isnan(profile.one_way_latency_s)) {
    throw std::invalid_argument("one_way_latency_s must be >= 0");
  }
  if (!(profile.loss_rate >= 0.0 && profile.loss_rate < 1.0)) {
    std::ostringstream msg;
    msg << "loss_rate " << profile.loss_rate << " outside the valid range [0,1)";
    throw std::invalid_argument(msg.str());
  }
  if (!(profile.bandwidth_Bps > 0.0)) {
    throw std::invalid_argument("bandwidth_Bps must be > 0 (or unlimited)");
  }
  if (profile.mtu_bytes <= kSegmentHeaderBytes) {
    std::ostringstream msg;
    msg << "mtu_bytes " << profile.mtu_bytes << " leaves no payload after the "
        << kSegmentHeaderBytes << "-byte header";
    throw std::invalid_argument(msg.str());
  }
}

double serialization_s(std::uint64_t size_bytes, const NetworkProfile& profile) {
  if (is_unlimited(profile.bandwidth_Bps)) return 0.0;
  return static_cast<double>(size_bytes) / profile.bandwidth_Bps;
}

DeliveryOutcome transmit(std::uint64_t size_bytes, double send_time_s,
                         const NetworkProfile& profile, DeterministicRng& rng) {
  validate(profile);
  if (size_bytes > profile.mtu_bytes) {
    std::ostringstream msg;
    msg << "packet of " << size_bytes << " bytes exceeds the " << profile.mtu_bytes
        << "-byte MTU; segmentation happens above this layer";
    throw std::invalid_argument(msg.str());
  }
  // Exactly one draw per call, delivered or not.
  const bool lost = rng.next_unit() < profile.loss_rate;
  DeliveryOutcome outcome;
  outcome.delivered = !lost;
  if (outcome.delivered) {
    outcome.arrival_time_s =
        send_time_s + profile.one_way_latency_s + serialization_s(size_bytes, profile);
  }
  return outcome;
}

std::uint64_t segment_count(std::uint64_t payload_bytes, const NetworkProfile& profile) {
  validate(profile);
  if (payload_bytes == 0) return 0;
  const std::uint64_t per_segment = profile.payload_per_segment_bytes();
  return (payload_bytes + per_segment - 1) / per_segment;
}

}  // namespace pqbench
