#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <doctest.h>

#include "convo/rng.hpp"

namespace {

using convo::NormalStream;
using convo::philox4x64;
using convo::uniform_from_bits;

using Words = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

}  // namespace

TEST_SUITE("rng") {

// Reference blocks generated with numpy's Philox bit generator
// (philox4x64, 10 rounds), which this implementation must reproduce
// word for word.
TEST_CASE("philox matches the numpy reference blocks") {
  const struct {
    Words counter;
    Key key;
    Words expected;
  } vectors[] = {
      {{0, 0, 0, 0},
       {0, 0},
       {0x16554d9eca36314cull, 0xdb20fe9d672d0fdcull, 0xd7e772cee186176bull,
        0x7e68b68aec7ba23bull}},
      {{1, 0, 0, 0},
       {0, 0},
       {0x02f4ba6408e4d89bull, 0x3dd62b0b9ca8c5b2ull, 0x1c8667a55d902e79ull,
        0x907d7a052fd5b4dcull}},
      {{2, 0, 0, 0},
       {0, 0},
       {0x809bf322883987c3ull, 0x471128b9e807f7ddull, 0xf250ba0dbec065b7ull,
        0xfc6ed66767a457bcull}},
      {{5, 7, 11, 13},
       {42, 4242},
       {0x121cbea8426fa590ull, 0x766798285823fe98ull, 0xdc42fab94765a79dull,
        0xa6f759a303353adbull}},
      {{0xFFFFFFFFFFFFFFFFull, 0xFFFFFFFFFFFFFFFFull, 0xFFFFFFFFFFFFFFFFull,
        0xFFFFFFFFFFFFFFFFull},
       {0xFFFFFFFFFFFFFFFFull, 0xFFFFFFFFFFFFFFFFull},
       {0x87b092c3013fe90bull, 0x438c3c67be8d0224ull, 0x9cc7d7c69cd777b6ull,
        0xa09caebf594f0ba0ull}},
  };
  for (const auto& v : vectors) {
    const Words got = philox4x64(v.counter, v.key);
    for (int j = 0; j < 4; ++j) CHECK(got[j] == v.expected[j]);
  }
}

TEST_CASE("philox is sensitive to every counter and key word") {
  const Words base = philox4x64({3, 4, 5, 6}, {7, 8});
  for (int word = 0; word < 4; ++word) {
    Words counter{3, 4, 5, 6};
    counter[word] ^= 1;
    CHECK(philox4x64(counter, {7, 8}) != base);
  }
  CHECK(philox4x64({3, 4, 5, 6}, {7 ^ 1, 8}) != base);
  CHECK(philox4x64({3, 4, 5, 6}, {7, 8 ^ 1}) != base);
}

TEST_CASE("uniform_from_bits maps into the open unit interval") {
  CHECK(uniform_from_bits(0) > 0.0);
  CHECK(uniform_from_bits(0) == 0x1.0p-53);
  CHECK(uniform_from_bits(0xFFFFFFFFFFFFFFFFull) < 1.0);
  CHECK(uniform_from_bits(0xFFFFFFFFFFFFFFFFull) == 1.0 - 0x1.0p-53);
  // Only the top 52 bits matter.
  CHECK(uniform_from_bits(0xFFFull) == uniform_from_bits(0));
  CHECK(uniform_from_bits(0x1000ull) > uniform_from_bits(0));
}

// Recompute the Box-Muller mapping from the raw philox words: the stream
// must be exactly this function of (key, counter), nothing hidden.
TEST_CASE("normal stream is the documented function of the philox words") {
  const std::uint64_t seed = 99, stream_id = 3, index = 17, attempt = 2;
  const NormalStream stream(seed, stream_id);
  Eigen::VectorXd draw(6);
  stream.fill_draw(index, attempt, draw);

  Eigen::VectorXd expected(6);
  int written = 0;
  for (std::uint64_t block = 0; written < 6; ++block) {
    const Words words = philox4x64({index, block, attempt, 0},
                                   {seed, stream_id});
    for (int pair = 0; pair < 2; ++pair) {
      const double u0 = uniform_from_bits(words[2 * pair]);
      const double u1 = uniform_from_bits(words[2 * pair + 1]);
      const double radius = std::sqrt(-2.0 * std::log(u0));
      const double angle = 2.0 * std::numbers::pi * u1;
      if (written < 6) expected[written++] = radius * std::cos(angle);
      if (written < 6) expected[written++] = radius * std::sin(angle);
    }
  }
  for (int j = 0; j < 6; ++j) CHECK(draw[j] == expected[j]);
}

TEST_CASE("draws are random access and independent of history") {
  const NormalStream stream(5, 1);
  Eigen::VectorXd a(3), b(3), c(3);
  stream.fill_draw(40, 0, a);
  stream.fill_draw(7, 0, b);
  stream.fill_draw(40, 0, c);
  CHECK((a.array() == c.array()).all());
  CHECK((a.array() != b.array()).any());

  // Rejection redraws get fresh noise without disturbing other indices.
  Eigen::VectorXd retry(3);
  stream.fill_draw(40, 1, retry);
  CHECK((retry.array() != a.array()).any());

  const NormalStream other(5, 2);
  Eigen::VectorXd d(3);
  other.fill_draw(40, 0, d);
  CHECK((d.array() != a.array()).any());
}

TEST_CASE("stream moments match the standard normal") {
  const NormalStream stream(2024, 0);
  const std::int64_t n = 400000;
  Eigen::VectorXd buf(4);
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0, sum4 = 0.0;
  for (std::int64_t i = 0; i < n / 4; ++i) {
    stream.fill_draw(static_cast<std::uint64_t>(i), 0, buf);
    for (int j = 0; j < 4; ++j) {
      const double z = buf[j];
      sum += z;
      sum2 += z * z;
      sum3 += z * z * z;
      sum4 += z * z * z * z;
    }
  }
  const double nd = static_cast<double>(n);
  // Standard errors: 1/sqrt(n) for the mean, sqrt(2/n) for the variance,
  // sqrt(15/n) for the third moment, sqrt(96/n) for the fourth.
  CHECK(std::abs(sum / nd) < 5.0 / std::sqrt(nd));
  CHECK(std::abs(sum2 / nd - 1.0) < 5.0 * std::sqrt(2.0 / nd));
  CHECK(std::abs(sum3 / nd) < 5.0 * std::sqrt(15.0 / nd));
  CHECK(std::abs(sum4 / nd - 3.0) < 5.0 * std::sqrt(96.0 / nd));
}

}  // TEST_SUITE
