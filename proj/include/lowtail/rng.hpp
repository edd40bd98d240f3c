#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace lowtail {

/// Philox4x32-10 block function (Salmon et al., SC'11).
///
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits. Being
/// stateless, any block of any stream can be computed independently.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream identified by (seed, stream_id).
///
/// The seed is the Philox key; the stream id occupies the upper half of the
/// counter and the block index the lower half, so distinct stream ids never
/// share a block. Satisfies UniformRandomBitGenerator with 32-bit output.
class RngStream {
 public:
  using result_type = std::uint32_t;

  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Child stream for sub-task `index`; a pure function of (this, index).
  RngStream split(std::uint64_t index) const noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int pos_ = 4;
};

/// splitmix64 finalizer, used for deriving child stream ids.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lowtail
