#pragma once

#include <cstdint>

namespace grf {

/// SplitMix64 finalizer (Stafford "Mix13").
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Counter-based random stream. The k-th draw of stream (seed, index) is a
/// pure function of (seed, index, k):
///
///   seed_key   = mix64(seed ^ 0x243F6A8885A308D3)
///   stream_key = mix64(seed_key ^ mix64(index + 0x13198A2E03707344))
///   draw_k     = mix64(mix64(stream_key + (k + 1) · 0x9E3779B97F4A7C15) ^ seed_key)
///
/// so independent sample indices never share state and any sample can be
/// regenerated without replaying the others.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform in the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal by inverse CDF of `uniform()`.
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t seed_key_;
  std::uint64_t stream_key_;
  std::uint64_t counter_ = 0;
};

}  // namespace grf
