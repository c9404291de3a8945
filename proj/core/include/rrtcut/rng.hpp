#pragma once

#include <cstdint>
#include <random>

namespace rrtcut {

/// SplitMix64 finalizer. Bijective on 64-bit words; every input bit affects
/// every output bit with probability close to 1/2.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Derives the 64-bit key of stream (master_seed, stream_index).
///
///   key = mix64(mix64(master_seed) + golden * (stream_index + 1))
///
/// The inner mix decorrelates nearby master seeds, the Weyl increment keeps
/// distinct indices distinct before the final mix, and the outer mix spreads
/// single-bit index changes over the whole word.
constexpr std::uint64_t derive_stream_key(std::uint64_t master_seed,
                                          std::uint64_t stream_index) noexcept {
  constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
  return mix64(mix64(master_seed) + golden * (stream_index + 1));
}

/// A reproducible random stream identified by (master_seed, stream_index).
///
/// Two streams with equal identifiers produce identical sequences. Streams with
/// different indices are seeded from keys passed through derive_stream_key and
/// behave as independent. Not thread-safe; give each replicate its own stream.
class RngStream {
public:
  using engine_type = std::mt19937_64;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }
  std::uint64_t key() const noexcept { return key_; }

  /// Child stream keyed by this stream's key. Used to keep independent
  /// sources of randomness (tree shape, tie-breaks, ...) separately seedable.
  RngStream substream(std::uint64_t tag) const { return RngStream(key_, tag); }

  engine_type& engine() noexcept { return engine_; }

  /// Uniform integer in [lo, hi] (inclusive). Requires lo <= hi.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

  /// Uniform real in [0, 1).
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t key_;
  engine_type engine_;
};

// Substream tags used across the library.
inline constexpr std::uint64_t kTreeStream = 1;
inline constexpr std::uint64_t kCutStream = 2;
inline constexpr std::uint64_t kBernoulliStream = 3;
inline constexpr std::uint64_t kConditionedStream = 4;
inline constexpr std::uint64_t kAttachStream = 5;

} // namespace rrtcut
