#pragma once

#include <cstdint>

namespace pointkg::cli {

/// Counter-based SplitMix64 stream.
///
/// Draw number c (c = 0, 1, ...) of stream s under seed S is
///   mix(key + (c + 1) * 0x9E3779B97F4A7C15),  key = mix(S ^ mix(s + 1)),
/// where mix is the SplitMix64 finalizer. Uniform doubles take the top 53 bits.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 1))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t at(std::uint64_t counter) const { return mix(key_ + (counter + 1) * kGolden); }
  std::uint64_t next() { return at(counter_++); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace pointkg::cli
