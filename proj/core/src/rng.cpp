#include "convo/rng.hpp"

#include <cmath>
#include <numbers>

namespace convo {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void mul_hilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                     std::uint64_t& lo) {
  const unsigned __int128 p =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

inline void round_once(std::array<std::uint64_t, 4>& c,
                       const std::array<std::uint64_t, 2>& k) {
  std::uint64_t hi0, lo0, hi1, lo1;
  mul_hilo(kMul0, c[0], hi0, lo0);
  mul_hilo(kMul1, c[2], hi1, lo1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key) {
  round_once(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    round_once(counter, key);
  }
  return counter;
}

void NormalStream::fill_draw(std::uint64_t index, std::uint64_t attempt,
                             Eigen::Ref<Eigen::VectorXd> out) const {
  const auto dim = static_cast<std::uint64_t>(out.size());
  std::uint64_t written = 0;
  for (std::uint64_t block = 0; written < dim; ++block) {
    const auto words = philox4x64({index, block, attempt, 0}, key_);
    // Box-Muller on the two uniform pairs of this block.
    double z[4];
    for (int pair = 0; pair < 2; ++pair) {
      const double u0 = uniform_from_bits(words[2 * pair]);
      const double u1 = uniform_from_bits(words[2 * pair + 1]);
      const double radius = std::sqrt(-2.0 * std::log(u0));
      const double angle = 2.0 * std::numbers::pi * u1;
      z[2 * pair] = radius * std::cos(angle);
      z[2 * pair + 1] = radius * std::sin(angle);
    }
    for (int j = 0; j < 4 && written < dim; ++j) {
      out[static_cast<Eigen::Index>(written++)] = z[j];
    }
  }
}

}  // namespace convo
