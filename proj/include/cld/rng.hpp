#pragma once

// Seeded, stream-split pseudo-random numbers with bit-identical output on
// every platform (the standard library's distributions are not portable).
// SplitMix64 state walk with the usual finalizer; streams decorrelate by
// mixing the stream id into the starting state.

#include <cstdint>

namespace cld {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_(stream_id) {
    state_ = mix(seed + 0x9e3779b97f4a7c15ull * (stream_id + 1));
    state_ = mix(state_ ^ mix(stream_id + 0xbf58476d1ce4e5b9ull));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on the open interval (0,1): 53-bit mantissa, half-step offset.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
};

}  // namespace cld
