#pragma once

#include <cstdint>
#include <string_view>

namespace pqbench {

// splitmix64. One word of state, the algorithm below is the whole contract:
// the stream for a given seed is pinned forever, golden values are asserted
// in the tests so it cannot drift between releases or platforms.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) noexcept : seed_(seed), state_(seed) {}

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Child generator keyed by (construction seed, tag). Forking neither
  // consumes nor depends on draws already taken from this generator, so
  // fork(k) yields the same child no matter when it is called.
  DeterministicRng fork(std::uint64_t tag) const noexcept {
    return DeterministicRng(mix64(seed_ ^ mix64(tag ^ 0xA3C59AC2ull)));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  // splitmix64 finalizer, doubles as the seed-derivation hash.
  static std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

inline std::uint64_t combine_seed(std::uint64_t a, std::uint64_t b) noexcept {
  return DeterministicRng::mix64(a ^ DeterministicRng::mix64(b));
}

// FNV-1a, for folding names into seeds.
inline std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace pqbench
