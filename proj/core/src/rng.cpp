#include "rrtcut/rng.hpp"

#include <array>
#include <cassert>

namespace rrtcut {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t key) {
  const std::uint64_t second = mix64(key ^ 0x6a09e667f3bcc909ULL);
  std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
      static_cast<std::uint32_t>(second), static_cast<std::uint32_t>(second >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      key_(derive_stream_key(master_seed, stream_index)),
      engine_(seeded_engine(key_)) {}

std::uint64_t RngStream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  assert(lo <= hi);
  if (lo == hi) {
    return lo;
  }
  std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
  return dist(engine_);
}

double RngStream::uniform01() {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

} // namespace rrtcut
