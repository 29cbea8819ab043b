#pragma once

// Counter-based random streams for reproducible parallel Monte Carlo.
//
// Philox4x32-10 (Salmon, Moraes, Dror, Shaw 2011): the 128-bit counter is
// split into a 64-bit stream id (high half) and a 64-bit block index (low
// half), the 64-bit key is the master seed. Streams with distinct ids never
// share a counter value, so they are disjoint without any jump-ahead.

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "rosenlab/core.hpp"

namespace rosenlab {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block encrypt(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// One independent stream: a UniformRandomBitGenerator producing 64-bit words.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint64_t streamId) : seed_(seed), stream_(streamId) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) refill();
    const result_type out = (static_cast<result_type>(buf_[2 * lane_]) << 32) | buf_[2 * lane_ + 1];
    ++lane_;
    return out;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(*this); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t streamId() const noexcept { return stream_; }
  /// Number of 128-bit blocks consumed so far.
  std::uint64_t position() const noexcept { return block_; }

  friend bool operator==(const RngStream& a, const RngStream& b) {
    return a.seed_ == b.seed_ && a.stream_ == b.stream_ && a.block_ == b.block_ && a.lane_ == b.lane_;
  }

 private:
  void refill() {
    const Philox4x32::Block ctr = {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                   static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    const Philox4x32::Key key = {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
    buf_ = Philox4x32::encrypt(ctr, key);
    ++block_;
    lane_ = 0;
  }

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  int lane_ = 2;
  Philox4x32::Block buf_{};
  boost::random::normal_distribution<double> normal_{};
};

/// `count` disjoint streams keyed by `masterSeed`; stream i has id i.
inline std::vector<RngStream> makeRngStreams(std::uint64_t masterSeed, std::size_t count) {
  require(count >= 1, ErrorCode::InvalidArgument, "stream count must be positive");
  std::vector<RngStream> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(masterSeed, i);
  return out;
}

}  // namespace rosenlab
