#pragma once

#include <cmath>
#include <cstdint>

namespace qbeat {

/// SplitMix64 generator. Stream `i` of a given master seed is a pure function
/// of (master_seed, i), so trajectories can be dealt to threads in any order
/// and still draw identical numbers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    // Decorrelate stream seeds by running the index through the mixer once.
    return SplitMix64(mix(master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1)));
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform strictly inside (0, 1), so log() is finite and nonzero.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double mean) { return -mean * std::log(uniform01()); }

  bool coin() { return (next() >> 63) != 0; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace qbeat
