#include "grf/random.hpp"

#include "grf/normal.hpp"

namespace grf {

namespace {
constexpr std::uint64_t kSeedSalt = 0x243F6A8885A308D3ULL;
constexpr std::uint64_t kIndexSalt = 0x13198A2E03707344ULL;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index)
    : seed_(seed),
      index_(index),
      seed_key_(mix64(seed ^ kSeedSalt)),
      stream_key_(mix64(seed_key_ ^ mix64(index + kIndexSalt))) {}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(mix64(stream_key_ + counter_ * kGolden) ^ seed_key_);
}

double RandomStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_quantile(uniform()); }

}  // namespace grf
