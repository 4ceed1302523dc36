#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

namespace convo {

// Counter-based pseudo-random generator (philox4x64, 10 rounds). Each block
// of four 64-bit words is a pure function of (counter, key), so any draw in
// any stream can be produced independently and in any order. That is what
// makes sampling reproducible for a fixed seed regardless of how many
// worker threads are used.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key);

// Map 64 random bits to a double in the open interval (0,1).
inline double uniform_from_bits(std::uint64_t bits) {
  // 52 bits, offset by half a slot: lands exactly on [2^-53, 1 - 2^-53].
  // One more bit would round the endpoints onto 0 or 1.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// A deterministic, random-access stream of standard normal vectors.
//
// Key layout: (seed, stream_id). Counter layout per block:
// (draw_index, block_index, attempt, 0). `attempt` separates redraws when a
// draw is rejected by a domain guard, so rejection never shifts the noise
// used by later draws.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_{seed, stream_id} {}

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream_id() const { return key_[1]; }

  // Fill `out` with the standard normal coordinates of draw `index`.
  void fill_draw(std::uint64_t index, std::uint64_t attempt,
                 Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  std::array<std::uint64_t, 2> key_;
};

}  // namespace convo
