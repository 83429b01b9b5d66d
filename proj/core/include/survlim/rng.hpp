#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace survlim {

// Counter-based random stream (Philox-4x32-10, Salmon et al., SC 2011).
//
// A stream is addressed by (seed, stream_id). Draws depend only on the
// stream address and the position within the stream, so replication r can
// always consume stream_id = r and produce identical output whether the
// replications run serially or on any number of threads.
//
// Streams derived with lane() shift the id left by 8 bits; callers must
// keep their own ids below 2^56 if they derive lanes.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id) {
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }

  static constexpr std::uint64_t kMaxLane = 255;

  RngStream lane(std::uint64_t k) const {
    return RngStream(seed_, (stream_ << 8) | (k & kMaxLane));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  // next raw 32-bit word
  std::uint32_t next_u32() {
    if (word_pos_ == 4) {
      block_ = philox_block(counter_++);
      word_pos_ = 0;
    }
    return block_[word_pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // uniform strictly inside (0,1)
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; consumes two uniforms per pair
  double normal();

  void fill_normals(std::vector<double>& out, std::size_t n);

  // one Philox block for an explicit counter value (used by tests)
  std::array<std::uint32_t, 4> philox_block(std::uint64_t counter) const {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      ctr = philox_round(ctr, key);
    }
    return ctr;
  }

 private:
  static std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& ctr,
                                                   const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint32_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int word_pos_ = 4;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace survlim
